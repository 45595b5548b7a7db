#include "modeseek/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace modeseek {

namespace {

// Maps arbitrary integer labels to contiguous ids ordered by label value.
std::vector<int> compact_labels(std::span<const int> labels, std::size_t& count) {
    std::vector<int> sorted(labels.begin(), labels.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    count = sorted.size();
    std::vector<int> ids(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        ids[i] = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), labels[i]) - sorted.begin());
    return ids;
}

std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

} // namespace

ClusterSizeDist ClusterSizeDist::from_sizes(std::span<const int> sizes) {
    std::int64_t total = 0;
    for (int s : sizes) {
        if (s <= 0) throw std::invalid_argument("cluster sizes must be positive");
        total += s;
    }
    if (total == 0) throw std::invalid_argument("cluster size distribution is empty");
    ClusterSizeDist dist;
    dist.masses.reserve(sizes.size());
    for (int s : sizes) dist.masses.push_back(static_cast<double>(s) / static_cast<double>(total));
    return dist;
}

void ClusterSizeDist::validate() const {
    if (masses.empty()) throw std::invalid_argument("cluster size distribution is empty");
    double total = 0.0;
    for (double m : masses) {
        if (!(m > 0.0 && m <= 1.0))
            throw std::invalid_argument("cluster masses must lie in (0, 1]");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("cluster masses must sum to 1");
}

std::vector<std::vector<std::int64_t>> contingency_table(std::span<const int> pred,
                                                         std::span<const int> truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("label vectors differ in length");
    if (pred.empty()) throw std::invalid_argument("label vectors are empty");
    std::size_t kp = 0, kt = 0;
    const std::vector<int> p = compact_labels(pred, kp);
    const std::vector<int> t = compact_labels(truth, kt);
    std::vector<std::vector<std::int64_t>> table(kp, std::vector<std::int64_t>(kt, 0));
    for (std::size_t i = 0; i < p.size(); ++i) ++table[p[i]][t[i]];
    return table;
}

double many_to_one_accuracy(std::span<const int> pred, std::span<const int> truth) {
    const auto table = contingency_table(pred, truth);
    std::int64_t correct = 0;
    std::int64_t total = 0;
    for (const auto& row : table) {
        std::int64_t best = 0;
        for (std::int64_t c : row) {
            best = std::max(best, c); // first max wins: smallest truth class on ties
            total += c;
        }
        correct += best;
    }
    return static_cast<double>(correct) / static_cast<double>(total);
}

double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() < 2) throw std::invalid_argument("adjusted rand index needs n >= 2");
    const auto table = contingency_table(pred, truth);

    std::int64_t sum_ij = 0, sum_i = 0, sum_j = 0;
    std::vector<std::int64_t> col_totals(table.front().size(), 0);
    for (const auto& row : table) {
        std::int64_t row_total = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            sum_ij += choose2(row[j]);
            row_total += row[j];
            col_totals[j] += row[j];
        }
        sum_i += choose2(row_total);
    }
    for (std::int64_t c : col_totals) sum_j += choose2(c);

    const double pairs = static_cast<double>(choose2(static_cast<std::int64_t>(pred.size())));
    const double expected = static_cast<double>(sum_i) * static_cast<double>(sum_j) / pairs;
    const double denom = 0.5 * static_cast<double>(sum_i + sum_j) - expected;
    if (denom == 0.0) return 1.0; // both partitions trivial in the same way
    return (static_cast<double>(sum_ij) - expected) / denom;
}

double cvm_distance(const ClusterSizeDist& p, const ClusterSizeDist& q) {
    p.validate();
    q.validate();

    // Jump sizes of each step CDF at every distinct atom value.
    std::map<double, std::pair<double, double>> jumps;
    for (double m : p.masses) jumps[m].first += 1.0 / static_cast<double>(p.masses.size());
    for (double m : q.masses) jumps[m].second += 1.0 / static_cast<double>(q.masses.size());

    double integral = 0.0;
    double fp = 0.0, fq = 0.0, prev = 0.0;
    for (const auto& [value, jump] : jumps) {
        const double gap = fp - fq;
        integral += (value - prev) * gap * gap;
        fp += jump.first;
        fq += jump.second;
        prev = value;
    }
    const double gap = fp - fq;
    integral += (1.0 - prev) * gap * gap;
    return integral;
}

EvalReport evaluate_clustering(std::span<const int> pred, std::span<const int> truth) {
    EvalReport report;
    report.contingency = contingency_table(pred, truth);
    report.ari = adjusted_rand_index(pred, truth);
    report.accuracy = many_to_one_accuracy(pred, truth);

    std::vector<int> pred_sizes, truth_sizes;
    for (const auto& row : report.contingency) {
        std::int64_t total = 0;
        for (std::int64_t c : row) total += c;
        pred_sizes.push_back(static_cast<int>(total));
    }
    for (std::size_t j = 0; j < report.contingency.front().size(); ++j) {
        std::int64_t total = 0;
        for (const auto& row : report.contingency) total += row[j];
        truth_sizes.push_back(static_cast<int>(total));
    }
    report.cvm = cvm_distance(ClusterSizeDist::from_sizes(pred_sizes),
                              ClusterSizeDist::from_sizes(truth_sizes));
    return report;
}

} // namespace modeseek
