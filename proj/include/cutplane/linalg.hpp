#pragma once

// Small dense helpers for the LP/QP kernels. Everything here works on
// row-major buffers; sizes stay in the tens, so no blocking or pivr tricks.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cutplane::linalg {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// LU factorization with partial pivoting, in place. Returns false on a
// numerically singular pivot.
class Lu {
  public:
    bool factor(std::vector<double> a, int n) {
        a_ = std::move(a);
        n_ = n;
        perm_.resize(n);
        for (int i = 0; i < n; ++i) perm_[i] = i;
        for (int k = 0; k < n; ++k) {
            int piv = k;
            double best = std::fabs(a_[k * n + k]);
            for (int i = k + 1; i < n; ++i) {
                const double v = std::fabs(a_[i * n + k]);
                if (v > best) { best = v; piv = i; }
            }
            if (best < 1e-13) return false;
            if (piv != k) {
                for (int j = 0; j < n; ++j) std::swap(a_[k * n + j], a_[piv * n + j]);
                std::swap(perm_[k], perm_[piv]);
            }
            const double d = a_[k * n + k];
            for (int i = k + 1; i < n; ++i) {
                const double m = a_[i * n + k] / d;
                a_[i * n + k] = m;
                for (int j = k + 1; j < n; ++j) a_[i * n + j] -= m * a_[k * n + j];
            }
        }
        return true;
    }

    // Solve A x = b.
    void solve(std::span<const double> b, std::vector<double>& x) const {
        x.resize(n_);
        for (int i = 0; i < n_; ++i) x[i] = b[perm_[i]];
        for (int i = 1; i < n_; ++i) {
            double s = x[i];
            for (int j = 0; j < i; ++j) s -= a_[i * n_ + j] * x[j];
            x[i] = s;
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = x[i];
            for (int j = i + 1; j < n_; ++j) s -= a_[i * n_ + j] * x[j];
            x[i] = s / a_[i * n_ + i];
        }
    }

    // Solve A^T x = b via U^T w = b, L^T v = w, x = P^T v.
    void solve_transposed(std::span<const double> b, std::vector<double>& x) const {
        std::vector<double> y(b.begin(), b.end());
        for (int i = 0; i < n_; ++i) {
            double s = y[i];
            for (int j = 0; j < i; ++j) s -= a_[j * n_ + i] * y[j];
            y[i] = s / a_[i * n_ + i];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = y[i];
            for (int j = i + 1; j < n_; ++j) s -= a_[j * n_ + i] * y[j];
            y[i] = s;
        }
        x.assign(n_, 0.0);
        for (int i = 0; i < n_; ++i) x[perm_[i]] = y[i];
    }

  private:
    std::vector<double> a_;
    std::vector<int> perm_;
    int n_ = 0;
};

// Cholesky factorization of a symmetric positive definite matrix, in place.
class Cholesky {
  public:
    bool factor(std::vector<double> a, int n) {
        a_ = std::move(a);
        n_ = n;
        for (int k = 0; k < n; ++k) {
            double d = a_[k * n + k];
            for (int j = 0; j < k; ++j) d -= a_[k * n + j] * a_[k * n + j];
            if (d < 1e-14) return false;
            const double r = std::sqrt(d);
            a_[k * n + k] = r;
            for (int i = k + 1; i < n; ++i) {
                double s = a_[i * n + k];
                for (int j = 0; j < k; ++j) s -= a_[i * n + j] * a_[k * n + j];
                a_[i * n + k] = s / r;
            }
        }
        return true;
    }

    void solve(std::span<const double> b, std::vector<double>& x) const {
        x.assign(b.begin(), b.end());
        for (int i = 0; i < n_; ++i) {
            double s = x[i];
            for (int j = 0; j < i; ++j) s -= a_[i * n_ + j] * x[j];
            x[i] = s / a_[i * n_ + i];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = x[i];
            for (int j = i + 1; j < n_; ++j) s -= a_[j * n_ + i] * x[j];
            x[i] = s / a_[i * n_ + i];
        }
    }

  private:
    std::vector<double> a_;
    int n_ = 0;
};

}  // namespace cutplane::linalg
