#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nfkp/factorization.hpp"

namespace nfkp {

/// One-form sum_k theta_k dt_k with series components, k = 1..K.
class ConnForm {
public:
    ConnForm() = default;
    /// K zero components.
    explicit ConnForm(const TruncParams& p);
    explicit ConnForm(std::vector<TSeries> components);

    const TruncParams& params() const { return p_; }
    int num_times() const { return static_cast<int>(comps_.size()); }
    /// Component of dt_k, k in [1, K].
    const TSeries& operator[](int k) const;
    TSeries& operator[](int k);

    ConnForm& operator+=(const ConnForm& o);
    friend ConnForm operator+(ConnForm a, const ConnForm& b) { return a += b; }
    ConnForm operator-() const;

    /// Every coefficient of every component has order <= -1.
    bool is_S_type() const;

private:
    TruncParams p_{};
    std::vector<TSeries> comps_;
};

/// F = sum_{i<j} F_ij dt_i ^ dt_j, only i < j stored.
struct Curvature2Form {
    std::map<std::pair<int, int>, TSeries> entries;
    const TSeries& at(int i, int j) const;
};

/// Z = Z_D - Z_S with Z_D,k = (L^k)_D and Z_S,k = -(L^k)_S.
std::pair<ConnForm, ConnForm> build_Z(const KPJet& jet);

/// |d W_n/dt_m - d W_m/dt_n - sign [W_m, W_n]| over valuations <= V - max(m, n).
double zs_residual(const ConnForm& W, int m, int n, int sign);

/// F_ij = d theta_j/dt_i - d theta_i/dt_j - [theta_i, theta_j] (the factor 1/2
/// of the usual convention is absorbed). Entry (i, j) only carries valuations
/// <= V - max(i, j), the range where it is determined by the truncated form.
Curvature2Form curvature(const ConnForm& theta);

struct YMQuadrature {
    double half_width = 0.05;  ///< cube [-k, k]^n
    int cube_dim = 2;          ///< n: t_1..t_n vary, the remaining times are 0
    int Mr = 24;               ///< realization cutoff
    int nodes = 8;             ///< Gauss-Legendre nodes per axis
};

/// YM_{k,n}(theta)_{ij} = int over [-k, k]^n of tr(F_ij F_ij^*), with F_ij(t)
/// realized on Fourier modes and integrated by tensor Gauss-Legendre.
double ym_value(const ConnForm& theta, int i, int j, const YMQuadrature& q);
/// Same, reusing a precomputed curvature.
double ym_value(const Curvature2Form& F, int i, int j, const YMQuadrature& q);

}  // namespace nfkp
