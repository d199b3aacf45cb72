#ifndef ARC_DATASET_HPP
#define ARC_DATASET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arc/linalg.hpp"

namespace arc {

// Sample matrix (one row per sample) with integer labels. Binary problems use
// labels {0,1} in storage and map to {-1,+1} where a signed label is needed.
struct Dataset {
    Matrix x;
    std::vector<int> labels;

    std::size_t size() const { return x.rows; }
    std::size_t dim() const { return x.cols; }
    std::size_t num_classes() const;
    Vector sample(std::size_t i) const { return x.row(i); }
    int signed_label(std::size_t i) const { return labels[i] == 0 ? -1 : 1; }

    // ||X||_{p,inf}, memoised per exponent.
    double group_norm(double p) const;

    void validate() const;

private:
    mutable std::map<double, double> norm_cache_;
};

struct BlobCenter {
    Vector position;
    int label = 0;
};

struct BlobConfig {
    std::size_t n = 100;
    std::size_t d = 2;
    std::size_t classes = 2;
    double separation = 1.0;  // distance of each class centre from the shared centre
    double offset = 0.0;      // shifts every centre along the second axis; moves the
                              // data away from the origin so bias-free nets can cut
                              // between the clusters at any angle
    double sigma = 0.3;
    std::vector<double> class_sigmas;  // optional per-class spread; overrides sigma
    std::vector<BlobCenter> centers;   // optional explicit mixture; overrides the
                                       // separation/offset layout
    double label_noise = 0.0;          // fraction of labels flipped to a random other class
    double b = 1.0;     // target ||X||_{p,inf}
    double p = kInf;    // exponent used for the radius clamp
    std::uint64_t seed = 0;
};

// K-class isotropic Gaussian blobs, radially clamped and rescaled so that
// ||X||_{p,inf} equals b exactly.
Dataset make_gaussian_blobs(const BlobConfig& cfg);

// The lower-bound construction: n identical samples with equal entries and
// p-norm exactly b, all labelled 1.
Dataset make_equal_entries_dataset(std::size_t n, std::size_t d, double b, double p);

void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

}  // namespace arc

#endif
