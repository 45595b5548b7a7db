#include "modeseek/dataset.hpp"

#include "modeseek/kernel.hpp"
#include "modeseek/meanshift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace modeseek {

double Dataset::max_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, norm(point(i)));
    return best;
}

double Dataset::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::max(best, squared_distance(point(i), point(j)));
    return std::sqrt(best);
}

std::uint64_t SplitMix64::next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::uniform_half() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::pair<double, double> SplitMix64::normal_pair() {
    const double u1 = uniform_open();
    const double u2 = uniform_half();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

Dataset gen_two_gaussians(std::size_t n, double separation, double sigma,
                          std::uint64_t rng_seed) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("gen_two_gaussians: n must be even and positive");
    if (!(separation > 0.0)) throw std::invalid_argument("gen_two_gaussians: separation > 0");
    if (sigma < 0.0) throw std::invalid_argument("gen_two_gaussians: sigma >= 0");

    Dataset data;
    data.n = n;
    data.d = 2;
    data.xs.resize(n * 2);
    data.labels = std::vector<int>(n);
    data.names = {"x0", "x1"};

    SplitMix64 rng(rng_seed);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = i < half ? -separation / 2.0 : separation / 2.0;
        const auto [z0, z1] = rng.normal_pair();
        data.xs[i * 2] = cx + sigma * z0;
        data.xs[i * 2 + 1] = sigma * z1 + 0.0; // normalizes -0

        (*data.labels)[i] = i < half ? 0 : 1;
    }

    std::ostringstream prov;
    prov << "synthetic two-gaussian n=" << n << " sep=" << separation << " sigma=" << sigma
         << " seed=" << rng_seed << " rng=splitmix64+box-muller";
    data.provenance = prov.str();
    return data;
}

namespace {

struct ColumnMoments {
    Vec mean;
    Vec sd; // population convention, divisor n
};

ColumnMoments column_moments(const Dataset& input) {
    ColumnMoments m;
    m.mean.assign(input.d, 0.0);
    m.sd.assign(input.d, 0.0);
    for (std::size_t i = 0; i < input.n; ++i) {
        const auto xi = input.point(i);
        for (std::size_t j = 0; j < input.d; ++j) m.mean[j] += xi[j];
    }
    for (std::size_t j = 0; j < input.d; ++j) m.mean[j] /= static_cast<double>(input.n);
    for (std::size_t i = 0; i < input.n; ++i) {
        const auto xi = input.point(i);
        for (std::size_t j = 0; j < input.d; ++j) {
            const double diff = xi[j] - m.mean[j];
            m.sd[j] += diff * diff;
        }
    }
    for (std::size_t j = 0; j < input.d; ++j)
        m.sd[j] = std::sqrt(m.sd[j] / static_cast<double>(input.n));
    return m;
}

std::string column_label(const Dataset& input, std::size_t j) {
    if (j < input.names.size() && !input.names[j].empty()) return input.names[j];
    return "column " + std::to_string(j);
}

// Z-scores the kept columns; drop_constant controls whether a constant
// column is an error or is removed (reported through dropped).
Dataset zscore_impl(const Dataset& input, bool drop_constant,
                    std::vector<std::string>* dropped) {
    if (input.n == 0) throw std::invalid_argument("zscore: empty dataset");
    const ColumnMoments m = column_moments(input);

    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < input.d; ++j) {
        if (m.sd[j] == 0.0) {
            if (!drop_constant)
                throw std::invalid_argument("zscore: constant " + column_label(input, j));
            if (dropped) dropped->push_back(column_label(input, j));
            continue;
        }
        keep.push_back(j);
    }
    if (keep.empty()) throw std::invalid_argument("zscore: every column is constant");

    Dataset out;
    out.n = input.n;
    out.d = keep.size();
    out.xs.resize(out.n * out.d);
    out.labels = input.labels;
    for (std::size_t j : keep)
        out.names.push_back(j < input.names.size() ? input.names[j] : std::string{});
    for (std::size_t i = 0; i < input.n; ++i) {
        const auto xi = input.point(i);
        for (std::size_t jj = 0; jj < keep.size(); ++jj) {
            const std::size_t j = keep[jj];
            out.xs[i * out.d + jj] = (xi[j] - m.mean[j]) / m.sd[j];
        }
    }
    out.provenance = input.provenance.empty() ? "z-scored" : input.provenance + "; z-scored";
    return out;
}

} // namespace

Dataset zscore(const Dataset& input) { return zscore_impl(input, false, nullptr); }

Pca2Model pca2_fit(const Dataset& input) {
    if (input.d < 2) throw std::invalid_argument("pca2: needs d >= 2");
    if (input.n < 3) throw std::invalid_argument("pca2: needs n >= 3");

    const ColumnMoments m = column_moments(input);
    SymMat cov(input.d);
    for (std::size_t i = 0; i < input.n; ++i) {
        const auto xi = input.point(i);
        for (std::size_t r = 0; r < input.d; ++r)
            for (std::size_t c = r; c < input.d; ++c)
                cov.at(r, c) += (xi[r] - m.mean[r]) * (xi[c] - m.mean[c]);
    }
    for (std::size_t r = 0; r < input.d; ++r)
        for (std::size_t c = r; c < input.d; ++c) {
            cov.at(r, c) /= static_cast<double>(input.n - 1);
            cov.at(c, r) = cov.at(r, c);
        }

    const EigenDecomposition eig = jacobi_eigen(cov, 1e-12);
    if (!(eig.values[1] > 1e-12 * std::max(eig.values[0], 1e-300)))
        throw std::invalid_argument("pca2: covariance rank below 2");

    Pca2Model model;
    model.mean = m.mean;
    model.eigenvalues = {eig.values[0], eig.values[1]};
    for (int k = 0; k < 2; ++k) {
        Vec axis = eig.vectors[k];
        std::size_t arg = 0;
        for (std::size_t j = 1; j < axis.size(); ++j)
            if (std::abs(axis[j]) > std::abs(axis[arg])) arg = j;
        if (axis[arg] < 0.0)
            for (double& v : axis) v = -v;
        model.components.push_back(std::move(axis));
    }
    return model;
}

Dataset pca2(const Dataset& input) {
    const Pca2Model model = pca2_fit(input);
    Dataset out;
    out.n = input.n;
    out.d = 2;
    out.xs.resize(out.n * 2);
    out.labels = input.labels;
    out.names = {"pc1", "pc2"};
    for (std::size_t i = 0; i < input.n; ++i) {
        const auto xi = input.point(i);
        for (int k = 0; k < 2; ++k) {
            double proj = 0.0;
            for (std::size_t j = 0; j < input.d; ++j)
                proj += (xi[j] - model.mean[j]) * model.components[k][j];
            out.xs[i * 2 + k] = proj;
        }
    }
    out.provenance = input.provenance.empty() ? "pca2" : input.provenance + "; pca2";
    return out;
}

namespace {

bool parse_double(const std::string& token, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(token, &pos);
        while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
        return pos == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    Dataset data;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool header_checked = false;
    std::vector<int> labels;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);

        if (!header_checked) {
            header_checked = true;
            bool numeric = true;
            double tmp;
            for (const auto& f : fields)
                if (!parse_double(f, tmp)) numeric = false;
            if (!numeric) {
                data.names.assign(fields.begin(), fields.end());
                columns = fields.size();
                continue;
            }
            columns = fields.size();
        }

        if (fields.size() != columns)
            throw std::runtime_error("load_csv: " + path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(columns) + " fields, got " +
                                     std::to_string(fields.size()));

        const std::size_t value_count = options.labels_last_column ? columns - 1 : columns;
        if (options.labels_last_column && columns < 2)
            throw std::runtime_error("load_csv: " + path + ": label column requires >= 2 columns");

        for (std::size_t j = 0; j < value_count; ++j) {
            double v;
            if (!parse_double(fields[j], v) || !std::isfinite(v))
                throw std::runtime_error("load_csv: " + path + ":" + std::to_string(line_no) +
                                         ": bad numeric field '" + fields[j] + "'");
            data.xs.push_back(v);
        }
        if (options.labels_last_column) {
            double v;
            if (!parse_double(fields[columns - 1], v) || v != std::floor(v))
                throw std::runtime_error("load_csv: " + path + ":" + std::to_string(line_no) +
                                         ": bad integer label '" + fields[columns - 1] + "'");
            labels.push_back(static_cast<int>(v));
        }
        ++data.n;
    }
    if (data.n == 0) throw std::runtime_error("load_csv: " + path + ": no data rows");
    data.d = options.labels_last_column ? columns - 1 : columns;
    if (options.labels_last_column) {
        data.labels = std::move(labels);
        if (!data.names.empty()) data.names.pop_back();
    }
    data.provenance = "csv:" + path;
    return data;
}

void write_csv(const Dataset& data, const std::string& path, bool include_labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    const bool labels = include_labels && data.labels.has_value();
    char buf[40];
    for (std::size_t i = 0; i < data.n; ++i) {
        for (std::size_t j = 0; j < data.d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.xs[i * data.d + j]);
            out << (j ? "," : "") << buf;
        }
        if (labels) out << ',' << (*data.labels)[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

namespace {

// Reads the next PGM header token, skipping whitespace and '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

} // namespace

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_pgm: cannot open " + path);

    const std::string magic = next_pgm_token(in);
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("load_pgm: " + path + ": not a P2/P5 file");

    auto read_int = [&](const char* what) {
        const std::string token = next_pgm_token(in);
        try {
            return std::stoul(token);
        } catch (const std::exception&) {
            throw std::runtime_error("load_pgm: " + path + ": bad " + what + " '" + token + "'");
        }
    };
    const unsigned long width = read_int("width");
    const unsigned long height = read_int("height");
    const unsigned long maxval = read_int("maxval");
    if (width == 0 || height == 0)
        throw std::runtime_error("load_pgm: " + path + ": empty image");
    if (maxval == 0 || maxval > 255)
        throw std::runtime_error("load_pgm: " + path + ": maxval must be in [1, 255]");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(width * height);

    if (magic == "P2") {
        for (auto& px : img.pixels) {
            const unsigned long v = read_int("pixel");
            if (v > maxval) throw std::runtime_error("load_pgm: " + path + ": pixel out of range");
            px = static_cast<std::uint8_t>(v);
        }
    } else {
        // single whitespace byte after maxval, then raw data
        in.read(reinterpret_cast<char*>(img.pixels.data()),
                static_cast<std::streamsize>(img.pixels.size()));
        if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
            throw std::runtime_error("load_pgm: " + path + ": truncated pixel data");
        for (std::uint8_t px : img.pixels)
            if (px > maxval)
                throw std::runtime_error("load_pgm: " + path + ": pixel out of range");
    }
    return img;
}

void write_pgm(const GrayImage& image, const std::string& path) {
    if (image.pixels.size() != image.width * image.height)
        throw std::invalid_argument("write_pgm: pixel count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    std::vector<std::uint8_t> binary(image.pixels.size());
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        binary[i] = image.pixels[i] ? 255 : 0;
    out.write(reinterpret_cast<const char*>(binary.data()),
              static_cast<std::streamsize>(binary.size()));
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

Dataset raw_image_features(const GrayImage& image) {
    if (image.pixels.empty() || image.pixels.size() != image.width * image.height)
        throw std::invalid_argument("image features: empty or inconsistent image");
    Dataset data;
    data.n = image.pixels.size();
    data.d = 3;
    data.xs.resize(data.n * 3);
    data.names = {"row", "col", "intensity"};
    for (std::size_t r = 0; r < image.height; ++r)
        for (std::size_t c = 0; c < image.width; ++c) {
            const std::size_t i = r * image.width + c;
            data.xs[i * 3] = static_cast<double>(r) / static_cast<double>(image.height);
            data.xs[i * 3 + 1] = static_cast<double>(c) / static_cast<double>(image.width);
            data.xs[i * 3 + 2] = static_cast<double>(image.at(r, c)) / 255.0;
        }
    data.provenance = "image features (row/height, col/width, intensity/255)";
    return data;
}

Dataset image_features(const GrayImage& image) {
    const Dataset raw = raw_image_features(image);
    std::vector<std::string> dropped;
    Dataset out = zscore_impl(raw, true, &dropped);
    for (const auto& name : dropped)
        out.provenance += "; warning: dropped constant " + name;
    return out;
}

double median_nn_distance(const Dataset& data) {
    if (data.n < 2) throw std::invalid_argument("median_nn_distance: needs n >= 2");
    Vec nearest(data.n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < data.n; ++i)
        for (std::size_t j = i + 1; j < data.n; ++j) {
            const double d2 = squared_distance(data.point(i), data.point(j));
            nearest[i] = std::min(nearest[i], d2);
            nearest[j] = std::min(nearest[j], d2);
        }
    for (double& v : nearest) v = std::sqrt(v);
    const std::size_t mid = data.n / 2;
    std::nth_element(nearest.begin(), nearest.begin() + mid, nearest.end());
    if (data.n % 2 == 1) return nearest[mid];
    const double upper = nearest[mid];
    const double lower = *std::max_element(nearest.begin(), nearest.begin() + mid);
    return 0.5 * (lower + upper);
}

SegmentResult segment(const GrayImage& image, const KernelProfile& profile, double h_mult,
                      std::size_t knn, double dark_quantile) {
    if (!(h_mult > 0.0)) throw std::invalid_argument("segment: h_mult must be positive");
    if (dark_quantile < 0.0 || dark_quantile > 1.0)
        throw std::invalid_argument("segment: dark_quantile must lie in [0, 1]");

    const Dataset features = image_features(image);

    SegmentResult result;
    result.median_nn = median_nn_distance(features);
    result.merge_tol = 4.0 * result.median_nn;
    result.h = h_mult * features.max_norm();

    MeanShiftConfig config;
    config.h = result.h;
    config.exclude_self = true;
    config.merge_tol = result.merge_tol;
    config.knn = std::min<std::size_t>(knn, features.n - 1);

    const RunResult run = run_all(features, profile, config);
    result.merged_modes = run.merged_modes.size();

    // Mean original intensity per merged mode.
    Vec mode_intensity(run.merged_modes.size(), 0.0);
    std::vector<std::size_t> counts(run.merged_modes.size(), 0);
    for (std::size_t i = 0; i < features.n; ++i) {
        const int m = run.assignment[i];
        mode_intensity[m] += static_cast<double>(image.pixels[i]);
        ++counts[m];
    }
    for (std::size_t m = 0; m < mode_intensity.size(); ++m)
        mode_intensity[m] /= static_cast<double>(counts[m]);

    result.mask.width = image.width;
    result.mask.height = image.height;
    result.mask.pixels.assign(image.pixels.size(), 0);

    if (dark_quantile <= 0.0) return result;
    if (dark_quantile >= 1.0) {
        std::fill(result.mask.pixels.begin(), result.mask.pixels.end(), 255);
        result.intensity_threshold = 256.0;
        return result;
    }

    // Linear-interpolation quantile of the mode intensities.
    Vec sorted = mode_intensity;
    std::sort(sorted.begin(), sorted.end());
    const double pos = dark_quantile * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double threshold = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    result.intensity_threshold = threshold;

    for (std::size_t i = 0; i < features.n; ++i)
        if (mode_intensity[run.assignment[i]] < threshold) result.mask.pixels[i] = 255;
    return result;
}

} // namespace modeseek
