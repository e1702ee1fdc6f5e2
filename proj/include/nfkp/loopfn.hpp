#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nfkp {

/// Coefficient scalar. Extended precision: coefficients near the lowest
/// reported order reach 1e5..1e6 while identities are checked to 1e-9.
using Real = long double;
using Complex = std::complex<Real>;
using MatrixXcr = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

/// Smooth d x d matrix-valued function on the circle, stored as its Fourier
/// coefficients c_m (coefficient of e^{imx}) for |m| <= M.
///
/// Products truncate back to |m| <= M, so identities that rely on exact
/// products (Leibniz, associativity) only hold when the mode supports of the
/// factors add up to at most M.
class LoopFn {
public:
    LoopFn() = default;
    LoopFn(int d, int M);

    static LoopFn constant(int d, int M, Complex c);
    /// Scalar function from a list of (mode, coefficient) pairs.
    static LoopFn from_modes(int M, std::initializer_list<std::pair<int, Complex>> modes);
    static LoopFn cos_mode(int M, int k, double amplitude = 1.0);
    static LoopFn sin_mode(int M, int k, double amplitude = 1.0);

    int dim() const { return d_; }
    int cutoff() const { return M_; }

    /// Entry (r, c) of the coefficient matrix of mode m.
    Complex& at(int m, int r = 0, int c = 0);
    Complex at(int m, int r = 0, int c = 0) const;

    /// Largest |m| with a nonzero coefficient, -1 for the zero function.
    int bandwidth() const;
    bool is_zero() const { return bandwidth() < 0; }

    LoopFn& operator+=(const LoopFn& g);
    LoopFn& operator-=(const LoopFn& g);
    LoopFn& operator*=(Complex s);
    /// this += s * g
    LoopFn& axpy(Complex s, const LoopFn& g);

    friend LoopFn operator+(LoopFn f, const LoopFn& g) { return f += g; }
    friend LoopFn operator-(LoopFn f, const LoopFn& g) { return f -= g; }
    friend LoopFn operator*(LoopFn f, Complex s) { return f *= s; }
    friend LoopFn operator*(Complex s, LoopFn f) { return f *= s; }
    LoopFn operator-() const;

    /// Pointwise matrix product, i.e. convolution of coefficients.
    friend LoopFn operator*(const LoopFn& f, const LoopFn& g);
    /// this += s * (f * g), without materializing the product.
    void add_product(Complex s, const LoopFn& f, const LoopFn& g);

    /// k-th derivative d^k/dx^k.
    LoopFn dx(int k = 1) const;
    /// this += s * d^k g/dx^k
    LoopFn& add_dx(Complex s, const LoopFn& g, int k);
    void set_zero();
    /// Zero-mean antiderivative; throws if |c_0| exceeds tol.
    LoopFn antideriv_zero_mean(double tol = 1e-12) const;
    /// Pull back by the translation x -> x + shift.
    LoopFn translate(double shift) const;
    /// Pull back by x -> h x for a positive integer h (mode m moves to h m, dropped beyond M).
    LoopFn dilate(int h) const;

    Eigen::MatrixXcd eval_at(double x) const;
    MatrixXcr eval_exact(Real x) const;
    std::complex<double> eval_scalar(double x) const;

    /// l2 norm of the coefficients (Frobenius per matrix).
    double norm() const;
    /// Upper bound for the sup norm: sum of coefficient Frobenius norms.
    double sup_bound() const;
    /// c_{-m} == conj(c_m) entrywise, scalar case.
    bool is_real(double tol = 1e-12) const;

    /// Pointwise matrix inverse, computed at 4M+2 collocation points and
    /// projected back to |m| <= M. Throws std::domain_error when the matrix is
    /// numerically singular at a collocation point.
    LoopFn pointwise_inverse() const;

    const std::vector<Complex>& data() const { return c_; }

    friend bool same_shape(const LoopFn& f, const LoopFn& g) {
        return f.d_ == g.d_ && f.M_ == g.M_;
    }

private:
    std::size_t index(int m) const { return static_cast<std::size_t>(m + M_) * d_ * d_; }
    void require_same_shape(const LoopFn& g, const char* op) const;

    int d_ = 1;
    int M_ = 0;
    std::vector<Complex> c_;
};

double distance(const LoopFn& f, const LoopFn& g);

}  // namespace nfkp
