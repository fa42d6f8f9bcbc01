#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copulacpd/error.hpp"

namespace copulacpd {

/// Dense row-major n x d matrix of confounder values.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

    const std::vector<double>& values() const noexcept { return values_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Time-ordered sample of (X, Y, Z) triples. Row order is meaningful and never changed.
struct Dataset {
    std::vector<double> x;
    std::vector<double> y;
    Matrix z;

    std::size_t n() const noexcept { return x.size(); }
    std::size_t d() const noexcept { return z.cols(); }

    /// Rows [begin, end) as a new dataset.
    Dataset slice(std::size_t begin, std::size_t end) const;

    bool operator==(const Dataset&) const = default;
};

inline constexpr std::size_t kMinRows = 4;

/// Checks lengths, n >= 4, d >= 1 and finiteness; returns the dataset unchanged.
const Dataset& validate(const Dataset& data);

/// A dataset split after `eta` rows: pre = rows [0, eta), post = rows [eta, n).
/// `eta` counts pre-segment rows, so 1 <= eta <= n - 1.
class SplitView {
public:
    SplitView(const Dataset& data, std::size_t eta);

    const Dataset& data() const noexcept { return *data_; }
    std::size_t eta() const noexcept { return eta_; }
    std::size_t pre_size() const noexcept { return eta_; }
    std::size_t post_size() const noexcept { return data_->n() - eta_; }

    Dataset pre() const { return data_->slice(0, eta_); }
    Dataset post() const { return data_->slice(eta_, data_->n()); }

private:
    const Dataset* data_;
    std::size_t eta_;
};

/// Validates that 1 <= eta <= n - 1 and returns the view. The dataset must outlive the view.
SplitView split(const Dataset& data, std::size_t eta);

/// Concatenates two datasets with matching d, a followed by b.
Dataset concat(const Dataset& a, const Dataset& b);

}  // namespace copulacpd
