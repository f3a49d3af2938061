#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace commcap {

// Minimal dense square matrix, row-major.
template <typename T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(int dim, T fill = T{})
        : dim_(dim), data_(static_cast<size_t>(dim) * static_cast<size_t>(dim), fill) {}

    int dim() const { return dim_; }
    T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * dim_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * dim_ + j]; }
    T* row(int i) { return data_.data() + static_cast<size_t>(i) * dim_; }
    const T* row(int i) const { return data_.data() + static_cast<size_t>(i) * dim_; }
    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

private:
    int dim_ = 0;
    std::vector<T> data_;
};

using RealMatrix = SquareMatrix<double>;
using ComplexMatrix = SquareMatrix<std::complex<double>>;

}  // namespace commcap
