#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mrdcs/error.hpp"

namespace mrdcs {

// Dense row-major matrix of doubles. Observations are rows.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw ShapeError("Matrix: data size does not match rows*cols");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> flat() const { return {data_.data(), data_.size()}; }
    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// n x p x d stack of predictor observations: sample i, predictor j,
// coordinate k (one coordinate per platform in multi-omics data).
class Tensor3 {
public:
    Tensor3() : n_(0), p_(0), d_(0) {}
    Tensor3(std::size_t n, std::size_t p, std::size_t d, double fill = 0.0)
        : n_(n), p_(p), d_(d), data_(n * p * d, fill) {}

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::size_t d() const { return d_; }

    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * p_ + j) * d_ + k];
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * p_ + j) * d_ + k];
    }

    // n x d sample of a single predictor.
    Matrix predictor(std::size_t j) const {
        Matrix out(n_, d_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < d_; ++k) out(i, k) = at(i, j, k);
        return out;
    }

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

private:
    std::size_t n_, p_, d_;
    std::vector<double> data_;
};

// Deterministic tree reduction; keeps long accumulations accurate without
// depending on summation order tricks elsewhere.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace mrdcs
