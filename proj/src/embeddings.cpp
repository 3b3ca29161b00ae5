#include "amreval/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "amreval/errors.hpp"

namespace amreval {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state); }

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) throw UsageError("next_below(0)");
    // Rejection sampling keeps the draw unbiased.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

double expected_distance(const SymbolicVec& a, const SymbolicVec& b, double sigma2) {
    double sq = 0.0;
    std::size_t dim = std::max(a.known.size(), b.known.size());
    for (std::size_t i = 0; i < dim; ++i) {
        double da = i < a.known.size() ? a.known[i] : 0.0;
        double db = i < b.known.size() ? b.known[i] : 0.0;
        sq += (da - db) * (da - db);
    }
    double coef_sq = 0.0;
    auto ia = a.oov.begin();
    auto ib = b.oov.begin();
    while (ia != a.oov.end() || ib != b.oov.end()) {
        if (ib == b.oov.end() || (ia != a.oov.end() && ia->first < ib->first)) {
            coef_sq += ia->second * ia->second;
            ++ia;
        } else if (ia == a.oov.end() || ib->first < ia->first) {
            coef_sq += ib->second * ib->second;
            ++ib;
        } else {
            double d = ia->second - ib->second;
            coef_sq += d * d;
            ++ia;
            ++ib;
        }
    }
    sq += static_cast<double>(dim) * sigma2 * coef_sq;
    return std::sqrt(std::max(0.0, sq));
}

std::string EmbeddingStore::normalize_token(const std::string& raw) {
    std::string t = raw;
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
        t = t.substr(1, t.size() - 2);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    // Strip a PropBank sense suffix: trailing "-NN".
    std::size_t dash = t.rfind('-');
    if (dash != std::string::npos && dash + 1 < t.size()) {
        bool digits = true;
        for (std::size_t i = dash + 1; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) digits = false;
        if (digits) t = t.substr(0, dash);
    }
    return t;
}

EmbeddingStore EmbeddingStore::load_file(const std::string& path, std::size_t limit) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path);
    EmbeddingStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        std::vector<double> vec;
        std::string comp;
        while (ls >> comp) {
            try {
                std::size_t used = 0;
                double v = std::stod(comp, &used);
                if (used != comp.size()) throw std::invalid_argument(comp);
                vec.push_back(v);
            } catch (const std::exception&) {
                throw DataError("unparsable embedding component '" + comp + "' at " +
                                path + ":" + std::to_string(line_no));
            }
        }
        if (vec.empty())
            throw DataError("embedding line without components at " + path + ":" +
                            std::to_string(line_no));
        if (store.dim_ == 0) store.dim_ = vec.size();
        if (vec.size() != store.dim_)
            throw DataError("inconsistent embedding dimension at " + path + ":" +
                            std::to_string(line_no) + " (expected " +
                            std::to_string(store.dim_) + ", got " +
                            std::to_string(vec.size()) + ")");
        store.table_.emplace(token, std::move(vec));
        if (limit && store.table_.size() >= limit) break;
    }
    if (store.table_.empty()) throw DataError("empty embedding file: " + path);

    // Calibrate the OOV variance to the loaded vocabulary: componentwise
    // variance, averaged over components.
    std::vector<double> mean(store.dim_, 0.0);
    for (const auto& [tok, vec] : store.table_)
        for (std::size_t i = 0; i < store.dim_; ++i) mean[i] += vec[i];
    for (double& m : mean) m /= static_cast<double>(store.table_.size());
    double var = 0.0;
    for (const auto& [tok, vec] : store.table_)
        for (std::size_t i = 0; i < store.dim_; ++i)
            var += (vec[i] - mean[i]) * (vec[i] - mean[i]);
    var /= static_cast<double>(store.table_.size() * store.dim_);
    store.sigma2_ = var > 1e-12 ? var : 1.0;
    return store;
}

EmbeddingStore EmbeddingStore::hash_fallback(std::size_t dim) {
    if (dim == 0) throw UsageError("fallback dimension must be positive");
    EmbeddingStore store;
    store.dim_ = dim;
    store.fallback_ = true;
    store.sigma2_ = 1.0 / 3.0;  // components uniform in [-1, 1)
    return store;
}

void EmbeddingStore::set_oov_variance(double sigma2) {
    if (!(sigma2 > 0.0)) throw UsageError("OOV variance must be positive");
    sigma2_ = sigma2;
}

const std::vector<double>* EmbeddingStore::find_normalized(const std::string& token) const {
    auto it = table_.find(token);
    if (it != table_.end()) return &it->second;
    std::size_t dash = token.find('-');
    if (dash != std::string::npos && dash > 0) {
        it = table_.find(token.substr(0, dash));
        if (it != table_.end()) return &it->second;
    }
    return nullptr;
}

std::string EmbeddingStore::resolve_key(const std::string& raw) const {
    std::string t = normalize_token(raw);
    if (table_.count(t)) return t;
    std::size_t dash = t.find('-');
    if (dash != std::string::npos && dash > 0) {
        std::string head = t.substr(0, dash);
        if (table_.count(head)) return head;
    }
    return t;
}

bool EmbeddingStore::contains(const std::string& raw) const {
    if (fallback_) return true;
    return find_normalized(normalize_token(raw)) != nullptr;
}

namespace {

std::vector<double> hash_vector(const std::string& token, std::size_t dim) {
    std::uint64_t s = fnv1a64(token);
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z = z ^ (z >> 31);
        vec[i] = static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
    }
    return vec;
}

}  // namespace

std::optional<std::vector<double>> EmbeddingStore::vector_of(const std::string& raw) const {
    std::string t = normalize_token(raw);
    if (fallback_) return hash_vector(t, dim_);
    const std::vector<double>* v = find_normalized(t);
    if (!v) return std::nullopt;
    return *v;
}

SymbolicVec EmbeddingStore::symbolic_of(const std::string& raw) const {
    SymbolicVec out;
    if (auto v = vector_of(raw)) {
        out.known = std::move(*v);
    } else {
        out.known.assign(dim_, 0.0);
        out.oov[resolve_key(raw)] = 1.0;
    }
    return out;
}

double EmbeddingStore::cosine(const std::string& a, const std::string& b) const {
    if (resolve_key(a) == resolve_key(b)) return 1.0;
    auto va = vector_of(a);
    auto vb = vector_of(b);
    if (!va || !vb) return 0.0;  // expected cosine against a random vector
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        dot += (*va)[i] * (*vb)[i];
        na += (*va)[i] * (*va)[i];
        nb += (*vb)[i] * (*vb)[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

TokenDistance EmbeddingStore::expected_euclidean(const std::string& a,
                                                 const std::string& b) const {
    bool oov = !contains(a) || !contains(b);
    double value = expected_distance(symbolic_of(a), symbolic_of(b), sigma2_);
    return {value, oov ? TokenDistance::Kind::Expected : TokenDistance::Kind::Exact};
}

}  // namespace amreval
