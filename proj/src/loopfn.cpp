#include "nfkp/loopfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nfkp {

namespace {

// (i m)^k by repeated multiplication; std::pow would go through exp/log
Complex ipow(int m, int k) {
    Real mag = 1;
    for (int j = 0; j < k; ++j) mag *= m;
    switch (k % 4) {
        case 0: return {mag, 0};
        case 1: return {0, mag};
        case 2: return {-mag, 0};
        default: return {0, -mag};
    }
}

// Row k holds (i m)^k for m in [-M, M]; rows are built on first use.
const Complex* ipow_row(int M, int k) {
    thread_local int cached_M = -1;
    thread_local std::vector<std::vector<Complex>> rows;
    if (M != cached_M) {
        rows.clear();
        cached_M = M;
    }
    while (static_cast<int>(rows.size()) <= k) {
        const int j = static_cast<int>(rows.size());
        std::vector<Complex> row(static_cast<std::size_t>(2 * M + 1));
        for (int m = -M; m <= M; ++m) row[static_cast<std::size_t>(m + M)] = ipow(m, j);
        rows.push_back(std::move(row));
    }
    return rows[static_cast<std::size_t>(k)].data() + M;
}

}  // namespace

LoopFn::LoopFn(int d, int M) : d_(d), M_(M) {
    if (d < 1 || M < 0) {
        throw std::invalid_argument("LoopFn: need d >= 1 and M >= 0");
    }
    c_.assign(static_cast<std::size_t>(2 * M + 1) * d * d, Complex{});
}

LoopFn LoopFn::constant(int d, int M, Complex c) {
    LoopFn f(d, M);
    for (int r = 0; r < d; ++r) f.at(0, r, r) = c;
    return f;
}

LoopFn LoopFn::from_modes(int M, std::initializer_list<std::pair<int, Complex>> modes) {
    LoopFn f(1, M);
    for (const auto& [m, c] : modes) f.at(m) += c;
    return f;
}

LoopFn LoopFn::cos_mode(int M, int k, double amplitude) {
    if (k == 0) return constant(1, M, amplitude);
    return from_modes(M, {{k, Real{0.5} * amplitude}, {-k, Real{0.5} * amplitude}});
}

LoopFn LoopFn::sin_mode(int M, int k, double amplitude) {
    const Complex half_i{0, Real{0.5} * amplitude};
    return from_modes(M, {{k, -half_i}, {-k, half_i}});
}

Complex& LoopFn::at(int m, int r, int c) {
    if (m < -M_ || m > M_) throw std::out_of_range("LoopFn: mode " + std::to_string(m) + " beyond cutoff");
    return c_[index(m) + static_cast<std::size_t>(r * d_ + c)];
}

Complex LoopFn::at(int m, int r, int c) const {
    if (m < -M_ || m > M_) return {};
    return c_[index(m) + static_cast<std::size_t>(r * d_ + c)];
}

int LoopFn::bandwidth() const {
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    for (int b = M_; b >= 0; --b) {
        for (int m : {b, -b}) {
            const auto first = c_.begin() + static_cast<std::ptrdiff_t>(index(m));
            if (std::any_of(first, first + static_cast<std::ptrdiff_t>(block),
                            [](const Complex& z) { return z != Complex{}; })) {
                return b;
            }
        }
    }
    return -1;
}

void LoopFn::require_same_shape(const LoopFn& g, const char* op) const {
    if (!same_shape(*this, g)) {
        throw std::invalid_argument(std::string("LoopFn::") + op + ": dimension or cutoff mismatch");
    }
}

LoopFn& LoopFn::operator+=(const LoopFn& g) {
    require_same_shape(g, "add");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += g.c_[i];
    return *this;
}

LoopFn& LoopFn::operator-=(const LoopFn& g) {
    require_same_shape(g, "sub");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= g.c_[i];
    return *this;
}

LoopFn& LoopFn::operator*=(Complex s) {
    for (auto& z : c_) z *= s;
    return *this;
}

LoopFn& LoopFn::axpy(Complex s, const LoopFn& g) {
    require_same_shape(g, "axpy");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * g.c_[i];
    return *this;
}

LoopFn LoopFn::operator-() const {
    LoopFn f = *this;
    for (auto& z : f.c_) z = -z;
    return f;
}

void LoopFn::add_product(Complex s, const LoopFn& f, const LoopFn& g) {
    require_same_shape(f, "mul");
    require_same_shape(g, "mul");
    const int bf = f.bandwidth();
    const int bg = g.bandwidth();
    if (bf < 0 || bg < 0) return;
    const int M = M_;
    if (d_ == 1) {
        // complex arithmetic spelled out on (re, im) pairs: the library
        // operator* goes through a NaN-aware runtime call
        const Real* gp = reinterpret_cast<const Real*>(g.c_.data() + M);
        Real* out = reinterpret_cast<Real*>(c_.data() + M);
        for (int p = -bf; p <= bf; ++p) {
            const Complex fs = s * f.c_[static_cast<std::size_t>(p + M)];
            if (fs == Complex{}) continue;
            const Real fr = fs.real();
            const Real fi = fs.imag();
            const int lo = std::max(-bg, -M - p);
            const int hi = std::min(bg, M - p);
            for (int q = lo; q <= hi; ++q) {
                const Real gr = gp[2 * q];
                const Real gi = gp[2 * q + 1];
                out[2 * (p + q)] += fr * gr - fi * gi;
                out[2 * (p + q) + 1] += fr * gi + fi * gr;
            }
        }
        return;
    }
    const int d = d_;
    for (int p = -bf; p <= bf; ++p) {
        const Complex* fb = f.c_.data() + f.index(p);
        const int lo = std::max(-bg, -M - p);
        const int hi = std::min(bg, M - p);
        for (int q = lo; q <= hi; ++q) {
            const Complex* gb = g.c_.data() + g.index(q);
            Complex* ob = c_.data() + index(p + q);
            for (int r = 0; r < d; ++r)
                for (int k = 0; k < d; ++k) {
                    const Complex frk = s * fb[r * d + k];
                    if (frk == Complex{}) continue;
                    for (int c = 0; c < d; ++c) ob[r * d + c] += frk * gb[k * d + c];
                }
        }
    }
}

LoopFn operator*(const LoopFn& f, const LoopFn& g) {
    f.require_same_shape(g, "mul");
    LoopFn out(f.d_, f.M_);
    out.add_product(1.0, f, g);
    return out;
}

LoopFn LoopFn::dx(int k) const {
    if (k < 0) throw std::invalid_argument("LoopFn::dx: negative order");
    LoopFn out = *this;
    if (k == 0) return out;
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    for (int m = -M_; m <= M_; ++m) {
        const Complex factor = ipow(m, k);
        for (std::size_t i = 0; i < block; ++i) out.c_[index(m) + i] *= factor;
    }
    return out;
}

LoopFn& LoopFn::add_dx(Complex s, const LoopFn& g, int k) {
    require_same_shape(g, "add_dx");
    if (k < 0) throw std::invalid_argument("LoopFn::add_dx: negative order");
    const int b = g.bandwidth();
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    const Complex* row = ipow_row(M_, k);
    for (int m = -b; m <= b; ++m) {
        if (k > 0 && m == 0) continue;
        const Complex factor = s * row[m];
        for (std::size_t i = 0; i < block; ++i) c_[index(m) + i] += factor * g.c_[g.index(m) + i];
    }
    return *this;
}

void LoopFn::set_zero() { std::fill(c_.begin(), c_.end(), Complex{}); }

LoopFn LoopFn::antideriv_zero_mean(double tol) const {
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    Real mean = 0;
    for (std::size_t i = 0; i < block; ++i) mean += std::norm(c_[index(0) + i]);
    if (std::sqrt(mean) > tol) {
        throw std::domain_error("antideriv_zero_mean: function has nonzero mean");
    }
    LoopFn out(d_, M_);
    for (int m = -M_; m <= M_; ++m) {
        if (m == 0) continue;
        const Complex factor = Real{1} / Complex{0, static_cast<Real>(m)};
        for (std::size_t i = 0; i < block; ++i) out.c_[index(m) + i] = c_[index(m) + i] * factor;
    }
    return out;
}

LoopFn LoopFn::translate(double shift) const {
    LoopFn out = *this;
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    for (int m = -M_; m <= M_; ++m) {
        const Complex phase = std::polar<Real>(1, m * static_cast<Real>(shift));
        for (std::size_t i = 0; i < block; ++i) out.c_[index(m) + i] *= phase;
    }
    return out;
}

LoopFn LoopFn::dilate(int h) const {
    if (h < 1) throw std::invalid_argument("LoopFn::dilate: factor must be a positive integer");
    LoopFn out(d_, M_);
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    for (int m = -M_; m <= M_; ++m) {
        const int target = h * m;
        if (target < -M_ || target > M_) continue;
        for (std::size_t i = 0; i < block; ++i) out.c_[out.index(target) + i] = c_[index(m) + i];
    }
    return out;
}

Eigen::MatrixXcd LoopFn::eval_at(double x) const {
    return eval_exact(x).cast<std::complex<double>>();
}

MatrixXcr LoopFn::eval_exact(Real x) const {
    MatrixXcr out = MatrixXcr::Zero(d_, d_);
    for (int m = -M_; m <= M_; ++m) {
        const Complex phase = std::polar<Real>(1, m * x);
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) out(r, c) += c_[index(m) + static_cast<std::size_t>(r * d_ + c)] * phase;
    }
    return out;
}

std::complex<double> LoopFn::eval_scalar(double x) const {
    if (d_ != 1) throw std::invalid_argument("LoopFn::eval_scalar: matrix-valued function");
    return eval_at(x)(0, 0);
}

double LoopFn::norm() const {
    Real s = 0;
    for (const auto& z : c_) s += std::norm(z);
    return static_cast<double>(std::sqrt(s));
}

double LoopFn::sup_bound() const {
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    Real s = 0;
    for (int m = -M_; m <= M_; ++m) {
        Real b = 0;
        for (std::size_t i = 0; i < block; ++i) b += std::norm(c_[index(m) + i]);
        s += std::sqrt(b);
    }
    return static_cast<double>(s);
}

bool LoopFn::is_real(double tol) const {
    const std::size_t block = static_cast<std::size_t>(d_) * d_;
    for (int m = 0; m <= M_; ++m)
        for (std::size_t i = 0; i < block; ++i)
            if (std::abs(c_[index(m) + i] - std::conj(c_[index(-m) + i])) > tol) return false;
    return true;
}

LoopFn LoopFn::pointwise_inverse() const {
    if (bandwidth() <= 0) {
        // constant matrix: exact inverse, no collocation noise
        Eigen::FullPivLU<MatrixXcr> lu(eval_exact(0));
        if (!lu.isInvertible() || lu.rcond() < 1e-12) {
            throw std::domain_error("pointwise_inverse: singular constant matrix");
        }
        const MatrixXcr inv = lu.inverse();
        LoopFn out(d_, M_);
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) out.at(0, r, c) = inv(r, c);
        return out;
    }
    const int points = 4 * M_ + 2;
    const Real step = 2 * std::numbers::pi_v<Real> / points;
    LoopFn out(d_, M_);
    for (int j = 0; j < points; ++j) {
        const Real x = j * step;
        const MatrixXcr value = eval_exact(x);
        Eigen::FullPivLU<MatrixXcr> lu(value);
        if (!lu.isInvertible() || lu.rcond() < 1e-12) {
            throw std::domain_error("pointwise_inverse: singular value at collocation point x = " +
                                    std::to_string(static_cast<double>(x)));
        }
        const MatrixXcr inv = lu.inverse();
        for (int m = -M_; m <= M_; ++m) {
            const Complex phase = std::polar<Real>(Real{1} / points, -m * x);
            for (int r = 0; r < d_; ++r)
                for (int c = 0; c < d_; ++c) out.at(m, r, c) += inv(r, c) * phase;
        }
    }
    return out;
}

double distance(const LoopFn& f, const LoopFn& g) { return (f - g).norm(); }

}  // namespace nfkp
