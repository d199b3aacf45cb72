#include "arc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arc/rng.hpp"

namespace arc {

std::size_t Dataset::num_classes() const {
    int top = 0;
    for (int l : labels) top = std::max(top, l);
    return static_cast<std::size_t>(top) + 1;
}

double Dataset::group_norm(double p) const {
    auto it = norm_cache_.find(p);
    if (it != norm_cache_.end()) return it->second;
    double b = data_group_norm(x, p);
    norm_cache_[p] = b;
    return b;
}

void Dataset::validate() const {
    require(x.rows >= 1, "dataset: empty");
    require(labels.size() == x.rows, "dataset: label count does not match rows");
    require(x.all_finite(), "dataset: non-finite features");
    for (int l : labels) require(l >= 0, "dataset: negative label");
}

Dataset make_gaussian_blobs(const BlobConfig& cfg) {
    require(cfg.n >= 1, "gen-data: n must be >= 1");
    require(cfg.d >= 1 && cfg.classes >= 2, "gen-data: need d >= 1 and >= 2 classes");
    require(cfg.b > 0 && cfg.sigma >= 0, "gen-data: b must be positive, sigma >= 0");

    Rng centre_rng = Rng::keyed(cfg.seed, 0x63656e74ULL);
    std::vector<Vector> centres(cfg.classes, Vector(cfg.d, 0.0));
    if (cfg.classes == 2 || cfg.d == 1) {
        // antipodal pair along the first axis; extra classes fall through to random
        for (std::size_t k = 0; k < cfg.classes; ++k)
            centres[k][0] = (k % 2 == 0 ? 1.0 : -1.0) * cfg.separation * (1.0 + k / 2);
    }
    if (cfg.classes > 2 && cfg.d > 1) {
        for (std::size_t k = 0; k < cfg.classes; ++k) {
            double n2 = 0.0;
            for (std::size_t j = 0; j < cfg.d; ++j) {
                centres[k][j] = centre_rng.normal();
                n2 += centres[k][j] * centres[k][j];
            }
            n2 = std::sqrt(n2);
            for (std::size_t j = 0; j < cfg.d; ++j) centres[k][j] *= cfg.separation / n2;
        }
    }
    if (cfg.offset != 0.0) {
        std::size_t axis = cfg.d > 1 ? 1 : 0;
        for (std::size_t k = 0; k < cfg.classes; ++k) centres[k][axis] += cfg.offset;
    }

    if (!cfg.class_sigmas.empty())
        require(cfg.class_sigmas.size() == cfg.classes,
                "gen-data: class_sigmas must list one spread per class");
    for (const BlobCenter& c : cfg.centers) {
        require(c.position.size() == cfg.d, "gen-data: centre dimension mismatch");
        require(c.label >= 0 && static_cast<std::size_t>(c.label) < cfg.classes,
                "gen-data: centre label out of range");
    }

    Dataset data;
    data.x = Matrix(cfg.n, cfg.d);
    data.labels.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const Vector* centre;
        std::size_t k;
        if (cfg.centers.empty()) {
            k = i % cfg.classes;
            centre = &centres[k];
        } else {
            const BlobCenter& c = cfg.centers[i % cfg.centers.size()];
            k = static_cast<std::size_t>(c.label);
            centre = &c.position;
        }
        data.labels[i] = static_cast<int>(k);
        double sigma = cfg.class_sigmas.empty() ? cfg.sigma : cfg.class_sigmas[k];
        Rng rng = Rng::keyed(cfg.seed, 0x626c6f62ULL, i);
        for (std::size_t j = 0; j < cfg.d; ++j)
            data.x.at(i, j) = (*centre)[j] + sigma * rng.normal();
        if (cfg.label_noise > 0.0 && rng.uniform() < cfg.label_noise) {
            std::size_t other = (k + 1 + rng.below(cfg.classes - 1)) % cfg.classes;
            data.labels[i] = static_cast<int>(other);
        }
    }

    // Radial clamp to the b-ball, then rescale so the max row norm is b exactly.
    double maxn = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        double n = vector_p_norm(data.x.row(i), cfg.p);
        if (n > cfg.b) {
            double s = cfg.b / n;
            for (std::size_t j = 0; j < cfg.d; ++j) data.x.at(i, j) *= s;
            n = cfg.b;
        }
        maxn = std::max(maxn, n);
    }
    if (maxn > 0.0 && maxn < cfg.b) {
        double s = cfg.b / maxn;
        for (double& e : data.x.data) e *= s;
    }
    return data;
}

Dataset make_equal_entries_dataset(std::size_t n, std::size_t d, double b, double p) {
    require(n >= 1 && d >= 1, "gen-data: need n >= 1 and d >= 1");
    require(b > 0 && p >= 1.0, "gen-data: b must be positive and p >= 1");
    // entries c with ||(c,...,c)||_p = b: c = b / d^{1/p}; for p = inf, c = b
    double c = b / std::pow(static_cast<double>(d), inv_exponent(p));
    Dataset data;
    data.x = Matrix(n, d);
    data.labels.assign(n, 1);
    for (double& e : data.x.data) e = c;
    return data;
}

namespace {

std::string format_f64(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_dataset_csv(const Dataset& data, const std::string& path) {
    data.validate();
    std::ofstream out(path);
    require(out.good(), "gen-data: cannot open output path " + path);
    for (std::size_t j = 0; j < data.dim(); ++j) out << "f" << j << ",";
    out << "label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.dim(); ++j) out << format_f64(data.x.at(i, j)) << ",";
        out << data.labels[i] << "\n";
    }
    require(out.good(), "gen-data: write failed for " + path);
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "dataset: cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "dataset: missing header");
    std::size_t cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    require(cols >= 2, "dataset: header needs at least one feature and a label");
    std::size_t d = cols - 1;

    std::vector<double> values;
    std::vector<int> labels;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t j = 0; j < d; ++j) {
            require(static_cast<bool>(std::getline(ss, cell, ',')), "dataset: short row");
            values.push_back(std::stod(cell));
        }
        require(static_cast<bool>(std::getline(ss, cell, ',')), "dataset: missing label");
        labels.push_back(std::stoi(cell));
    }
    require(!labels.empty(), "dataset: no rows");
    Dataset data;
    data.x = Matrix(labels.size(), d, std::move(values));
    data.labels = std::move(labels);
    data.validate();
    return data;
}

}  // namespace arc
