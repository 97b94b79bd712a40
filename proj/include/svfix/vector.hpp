#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace svfix {

/// A point of the ambient space, dimension 1 or 2. The dimension is fixed
/// per scenario; coordinates are always finite.
class Vector {
  public:
    Vector() = default;
    explicit Vector(double x) : dim_(1), c_{x, 0.0} { check(); }
    Vector(double x, double y) : dim_(2), c_{x, y} { check(); }

    static Vector zero(int dim) { return dim == 1 ? Vector(0.0) : Vector(0.0, 0.0); }

    int dim() const { return dim_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    double x() const { return c_[0]; }
    double y() const { return c_[1]; }

    double norm2() const { return c_[0] * c_[0] + c_[1] * c_[1]; }
    double norm() const { return std::sqrt(norm2()); }

    friend Vector operator+(const Vector& a, const Vector& b) {
        require_same(a, b);
        Vector r = a;
        r.c_[0] += b.c_[0];
        r.c_[1] += b.c_[1];
        return r;
    }
    friend Vector operator-(const Vector& a, const Vector& b) {
        require_same(a, b);
        Vector r = a;
        r.c_[0] -= b.c_[0];
        r.c_[1] -= b.c_[1];
        return r;
    }
    friend Vector operator*(double s, const Vector& a) {
        Vector r = a;
        r.c_[0] *= s;
        r.c_[1] *= s;
        return r;
    }
    friend Vector operator*(const Vector& a, double s) { return s * a; }

    friend double dot(const Vector& a, const Vector& b) {
        require_same(a, b);
        return a.c_[0] * b.c_[0] + a.c_[1] * b.c_[1];
    }
    friend double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

    friend bool operator==(const Vector& a, const Vector& b) {
        return a.dim_ == b.dim_ && a.c_ == b.c_;
    }

    std::string str() const {
        if (dim_ == 1)
            return std::to_string(c_[0]);
        return "(" + std::to_string(c_[0]) + ", " + std::to_string(c_[1]) + ")";
    }

  private:
    void check() const {
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite(c_[static_cast<std::size_t>(i)]))
                throw std::invalid_argument("vector coordinate not finite");
    }
    static void require_same(const Vector& a, const Vector& b) {
        if (a.dim_ != b.dim_)
            throw std::invalid_argument("dimension mismatch");
    }

    int dim_ = 1;
    std::array<double, 2> c_{0.0, 0.0};
};

} // namespace svfix
