#pragma once

#include <cstddef>
#include <vector>

namespace bsdelab {

/// Dense row-major P x N array.
template <typename T>
class Field2D {
public:
    Field2D() = default;
    Field2D(std::size_t rows, std::size_t cols, T init = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, init) {}

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Dense P x N x M array (path x time x mark).
template <typename T>
class Field3D {
public:
    Field3D() = default;
    Field3D(std::size_t d0, std::size_t d1, std::size_t d2, T init = T{})
        : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, init) {}

    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * d1_ + j) * d2_ + k];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * d1_ + j) * d2_ + k];
    }

    std::size_t dim0() const { return d0_; }
    std::size_t dim1() const { return d1_; }
    std::size_t dim2() const { return d2_; }
    const std::vector<T>& data() const { return data_; }

private:
    std::size_t d0_ = 0;
    std::size_t d1_ = 0;
    std::size_t d2_ = 0;
    std::vector<T> data_;
};

}  // namespace bsdelab
