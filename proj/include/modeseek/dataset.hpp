#pragma once

#include "modeseek/linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace modeseek {

struct KernelProfile;

/// n points in d dimensions, row-major, with optional ground-truth labels.
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> xs; // n * d
    std::optional<std::vector<int>> labels;
    std::vector<std::string> names; // per-column, may be empty
    std::string provenance;

    std::span<const double> point(std::size_t i) const { return {xs.data() + i * d, d}; }
    std::span<double> mutable_point(std::size_t i) { return {xs.data() + i * d, d}; }

    double max_norm() const; // max_i ||x_i||
    double diameter() const; // max pairwise distance, O(n^2)
};

/// splitmix64: 64-bit integer-state generator; the state path involves no
/// floating-point math, so streams are identical across platforms.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform_open();  // (0, 1]
    double uniform_half();  // [0, 1)
    /// Box-Muller transform; consumes two raw draws per pair.
    std::pair<double, double> normal_pair();
};

/// Two isotropic Gaussian clusters in R^2 centered at (-sep/2, 0) and
/// (+sep/2, 0), n/2 points each, labels 0 then 1.
Dataset gen_two_gaussians(std::size_t n, double separation, double sigma,
                          std::uint64_t rng_seed);

/// Feature-wise z-score normalization, population convention (divisor n).
/// Throws naming the offending column when one is constant.
Dataset zscore(const Dataset& input);

struct Pca2Model {
    Vec mean;                 // column means, length d
    std::vector<Vec> components; // two principal axes, length d each
    Vec eigenvalues;          // top-2 covariance eigenvalues, descending
};

Pca2Model pca2_fit(const Dataset& input);

/// Projection onto the top-2 principal axes (covariance divisor n - 1);
/// each component's largest-magnitude loading is oriented positive.
Dataset pca2(const Dataset& input);

struct CsvOptions {
    bool labels_last_column = false;
};

Dataset load_csv(const std::string& path, const CsvOptions& options = {});
void write_csv(const Dataset& data, const std::string& path, bool include_labels = true);

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels; // row-major intensities in [0, 255]

    std::uint8_t at(std::size_t row, std::size_t col) const {
        return pixels[row * width + col];
    }
};

GrayImage load_pgm(const std::string& path); // P2 or P5, maxval <= 255
void write_pgm(const GrayImage& image, const std::string& path); // P5, values {0, 255}

/// One point per pixel with features (row/height, col/width, intensity/255),
/// before normalization.
Dataset raw_image_features(const GrayImage& image);

/// raw_image_features followed by z-scoring; constant columns are dropped
/// with a warning recorded in the result's provenance.
Dataset image_features(const GrayImage& image);

/// Median over points of the distance to their nearest distinct neighbor.
double median_nn_distance(const Dataset& data);

struct SegmentResult {
    GrayImage mask;          // foreground 255, background 0
    std::size_t merged_modes = 0;
    double h = 0.0;
    double merge_tol = 0.0;
    double median_nn = 0.0;
    double intensity_threshold = 0.0;
};

/// Mean-shift segmentation in (row, col, intensity) feature space: bandwidth
/// h_mult * ||x_max||, merge tolerance 4x the median nearest-neighbor
/// distance, exclude-self update with a kNN-restricted weighted mean. Pixels
/// whose merged mode has mean intensity below the dark_quantile quantile of
/// mode intensities form the foreground.
SegmentResult segment(const GrayImage& image, const KernelProfile& profile, double h_mult,
                      std::size_t knn, double dark_quantile);

} // namespace modeseek
