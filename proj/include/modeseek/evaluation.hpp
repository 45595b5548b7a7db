#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace modeseek {

/// Normalized cluster sizes: positive masses summing to 1.
struct ClusterSizeDist {
    std::vector<double> masses;

    static ClusterSizeDist from_sizes(std::span<const int> sizes);
    void validate() const;
};

struct EvalReport {
    double ari = 0.0;
    double accuracy = 0.0;
    double cvm = 0.0;
    std::vector<std::vector<std::int64_t>> contingency; // predicted x truth
};

/// Fraction correct after mapping each predicted cluster to its majority
/// truth class; majority ties resolve to the smallest truth class index.
double many_to_one_accuracy(std::span<const int> pred, std::span<const int> truth);

/// Chance-corrected pair-counting agreement from the contingency table.
/// Degenerate zero denominator (both partitions trivial in the same way)
/// evaluates to 1.
double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth);

/// Cramer-von Mises distance between step CDFs of the two mass multisets:
/// each atom carries weight 1/(number of atoms in its own distribution) and
/// the integral over [0,1] is evaluated exactly at the union of atom values.
double cvm_distance(const ClusterSizeDist& p, const ClusterSizeDist& q);

std::vector<std::vector<std::int64_t>> contingency_table(std::span<const int> pred,
                                                         std::span<const int> truth);

/// Full report: ARI, many-to-one accuracy, and CvM between the normalized
/// predicted-cluster-size and truth-class-size distributions.
EvalReport evaluate_clustering(std::span<const int> pred, std::span<const int> truth);

} // namespace modeseek
