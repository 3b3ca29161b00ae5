#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace amreval {

// Distance between two token embeddings. kind is Expected when at least one
// operand was out of vocabulary and the closed-form expectation was used.
struct TokenDistance {
    double value = 0.0;
    enum class Kind { Exact, Expected } kind = Kind::Exact;
};

// An embedding expressed as an affine combination of base vectors: a dense
// known part plus net coefficients on out-of-vocabulary token identities.
// Two mentions of the same OOV token share one (unknown) base vector, which
// is what makes the expected-distance algebra work.
struct SymbolicVec {
    std::vector<double> known;
    std::map<std::string, double> oov;
};

// sqrt of the expected squared Euclidean distance between two affine
// combinations, with OOV base vectors modeled as independent mean-zero
// vectors with per-component variance sigma2:
//   E||a-b||^2 = ||known_a - known_b||^2 + dim*sigma2 * sum_t (coef_a - coef_b)^2
double expected_distance(const SymbolicVec& a, const SymbolicVec& b, double sigma2);

// Word-vector table with deterministic out-of-vocabulary treatment. Lookups
// normalize tokens: lowercase, strip a trailing PropBank sense suffix
// (look-over-06 -> look-over), fall back to the first hyphen segment.
// Immutable after construction; safe for concurrent reads.
class EmbeddingStore {
public:
    // Plain-text file, one token per line followed by its components.
    // limit, when nonzero, caps the vocabulary (for fast tests).
    static EmbeddingStore load_file(const std::string& path, std::size_t limit = 0);

    // Deterministic seedless hash-to-vector embedder covering every token;
    // lets the full test suite run without an embedding file.
    static EmbeddingStore hash_fallback(std::size_t dim = 32);

    std::size_t dimension() const { return dim_; }
    bool is_fallback() const { return fallback_; }
    std::size_t vocabulary_size() const { return table_.size(); }

    // Per-component variance of the OOV model; calibrated to the loaded
    // vocabulary (analytic 1/3 for the hash fallback).
    double oov_variance() const { return sigma2_; }
    void set_oov_variance(double sigma2);

    static std::string normalize_token(const std::string& raw);

    bool contains(const std::string& raw) const;
    std::optional<std::vector<double>> vector_of(const std::string& raw) const;

    // In-vocabulary token -> dense vector; OOV token -> unit coefficient on
    // its normalized identity.
    SymbolicVec symbolic_of(const std::string& raw) const;

    // Standard cosine in [-1,1]. Identical normalized tokens give exactly
    // 1.0; a zero vector or an OOV operand gives 0.0.
    double cosine(const std::string& a, const std::string& b) const;

    // Exact Euclidean distance when both tokens are known; the closed-form
    // expectation otherwise (same OOV string twice -> 0).
    TokenDistance expected_euclidean(const std::string& a, const std::string& b) const;

private:
    EmbeddingStore() = default;

    // Returns the stored vector for an already-normalized token, trying the
    // first-hyphen-segment fallback; nullptr when OOV.
    const std::vector<double>* find_normalized(const std::string& token) const;
    // Canonical OOV identity / vocabulary key for a raw token.
    std::string resolve_key(const std::string& raw) const;

    std::size_t dim_ = 0;
    double sigma2_ = 1.0;
    bool fallback_ = false;
    std::unordered_map<std::string, std::vector<double>> table_;
};

// Small deterministic RNG used across the library (smatch restarts,
// bootstrap resampling) so results do not depend on the C++ standard
// library's distribution implementations.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64();
    // Uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n);
    // Uniform in [0, 1)
    double next_double();
};

std::uint64_t fnv1a64(const std::string& s);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace amreval
