/* The public header must stay consumable from plain C. */
#include <amreval.h>
#include <stdio.h>

int main(void) {
    amreval_config cfg;
    amreval_config_default(&cfg);
    printf("amreval %s, %d metrics\n", amreval_version(), amreval_metric_count());
    return amreval_metric_count() == 9 ? 0 : 1;
}
