#pragma once

#include <string>
#include <vector>

#include "qfalab/density.hpp"

namespace qfalab {

// Joint probability mass over finite ordered label sets X and Y, row-major
// (x-major). Entries are nonnegative and sum to one within 1e-9; tiny
// negatives (>= -1e-12) are clamped at construction.
struct JointDistribution {
    std::vector<std::string> labels_x;
    std::vector<std::string> labels_y;
    std::vector<double> mass;

    double at(std::size_t x, std::size_t y) const {
        return mass[x * labels_y.size() + y];
    }

    std::vector<double> marginal_x() const {
        std::vector<double> m(labels_x.size(), 0.0);
        for (std::size_t x = 0; x < labels_x.size(); ++x)
            for (std::size_t y = 0; y < labels_y.size(); ++y) m[x] += at(x, y);
        return m;
    }

    std::vector<double> marginal_y() const {
        std::vector<double> m(labels_y.size(), 0.0);
        for (std::size_t x = 0; x < labels_x.size(); ++x)
            for (std::size_t y = 0; y < labels_y.size(); ++y) m[y] += at(x, y);
        return m;
    }

    double h_x() const { return entropy_bits(marginal_x()); }
    double h_y() const { return entropy_bits(marginal_y()); }
    double h_xy() const { return entropy_bits(mass); }
    double h_x_given_y() const { return h_xy() - h_y(); }
};

inline JointDistribution make_joint_distribution(
    std::vector<std::string> labels_x, std::vector<std::string> labels_y,
    std::vector<double> mass) {
    if (mass.size() != labels_x.size() * labels_y.size())
        throw DimensionMismatch("mass size " + std::to_string(mass.size()) +
                                " vs " + std::to_string(labels_x.size()) + "x" +
                                std::to_string(labels_y.size()));
    double sum = 0.0;
    for (double& v : mass) {
        if (v < -1e-12)
            throw NotADistribution("negative mass " + std::to_string(v));
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw NotADistribution("mass sums to " + std::to_string(sum));
    return JointDistribution{std::move(labels_x), std::move(labels_y),
                             std::move(mass)};
}

}  // namespace qfalab
