#include "nfkp/zerocurv.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <gsl/gsl_integration.h>

namespace nfkp {

ConnForm::ConnForm(const TruncParams& p) : p_(p) {
    for (int k = 0; k < p.K; ++k) comps_.emplace_back(p, 0);
}

ConnForm::ConnForm(std::vector<TSeries> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("ConnForm: need at least one component");
    p_ = comps_.front().params();
    for (const auto& c : comps_) {
        if (!(c.params() == p_)) throw std::invalid_argument("ConnForm: components disagree on parameters");
    }
    if (static_cast<int>(comps_.size()) != p_.K) {
        throw std::invalid_argument("ConnForm: expected one component per time");
    }
}

const TSeries& ConnForm::operator[](int k) const {
    if (k < 1 || k > num_times()) throw std::out_of_range("ConnForm: time index " + std::to_string(k));
    return comps_[static_cast<std::size_t>(k - 1)];
}

TSeries& ConnForm::operator[](int k) {
    if (k < 1 || k > num_times()) throw std::out_of_range("ConnForm: time index " + std::to_string(k));
    return comps_[static_cast<std::size_t>(k - 1)];
}

ConnForm& ConnForm::operator+=(const ConnForm& o) {
    if (o.num_times() != num_times()) throw std::invalid_argument("ConnForm: size mismatch");
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] += o.comps_[k];
    return *this;
}

ConnForm ConnForm::operator-() const {
    ConnForm out = *this;
    for (auto& c : out.comps_) c = -c;
    return out;
}

bool ConnForm::is_S_type() const {
    for (const auto& c : comps_)
        for (const auto& [alpha, s] : c.terms())
            if (s.order() >= 0) return false;
    return true;
}

const TSeries& Curvature2Form::at(int i, int j) const {
    auto it = entries.find({i, j});
    if (it == entries.end()) {
        throw std::out_of_range("Curvature2Form: no entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return it->second;
}

std::pair<ConnForm, ConnForm> build_Z(const KPJet& jet) {
    const int K = jet.params.K;
    std::vector<TSeries> zd, zs;
    TSeries Lk = jet.L;
    for (int k = 1; k <= K; ++k) {
        if (k > 1) Lk = tmul(Lk, jet.L);
        zd.push_back(project_D(Lk));
        zs.push_back(-project_S(Lk));
    }
    return {ConnForm(std::move(zd)), ConnForm(std::move(zs))};
}

double zs_residual(const ConnForm& W, int m, int n, int sign) {
    const int K = W.num_times();
    if (m < 1 || n < 1 || m > K || n > K || m == n) {
        throw std::invalid_argument("zs_residual: need distinct time indices in [1, K]");
    }
    if (sign != 1 && sign != -1) throw std::invalid_argument("zs_residual: sign must be +1 or -1");
    TSeries r = ddt(W[n], m) - ddt(W[m], n);
    r -= tcommutator(W[m], W[n]) * Complex{static_cast<Real>(sign)};
    return norm(r, W.params().V - std::max(m, n));
}

Curvature2Form curvature(const ConnForm& theta) {
    Curvature2Form F;
    const int K = theta.num_times();
    for (int i = 1; i <= K; ++i) {
        for (int j = i + 1; j <= K; ++j) {
            TSeries f = ddt(theta[j], i) - ddt(theta[i], j);
            f -= tcommutator(theta[i], theta[j]);
            F.entries.emplace(std::make_pair(i, j), f.restrict_val(theta.params().V - j));
        }
    }
    return F;
}

double ym_value(const ConnForm& theta, int i, int j, const YMQuadrature& q) {
    if (q.cube_dim > theta.num_times()) throw std::invalid_argument("ym_value: cube dimension exceeds K");
    if (j > theta.num_times()) throw std::invalid_argument("ym_value: index exceeds K");
    return ym_value(curvature(theta), i, j, q);
}

double ym_value(const Curvature2Form& F, int i, int j, const YMQuadrature& q) {
    if (!(1 <= i && i < j)) throw std::invalid_argument("ym_value: need 1 <= i < j");
    if (q.nodes < 1 || q.cube_dim < 1) throw std::invalid_argument("ym_value: need positive node count and dimension");
    if (!(q.half_width >= 0.0)) throw std::invalid_argument("ym_value: negative cube half-width");
    if (F.entries.empty()) throw std::invalid_argument("ym_value: empty curvature");
    const int K = F.entries.begin()->second.params().K;
    if (j > K || q.cube_dim > K) throw std::invalid_argument("ym_value: index exceeds K");
    const TSeries& Fij = F.at(i, j);

    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(q.nodes));
    if (!table) throw std::runtime_error("ym_value: cannot allocate quadrature table");
    std::vector<double> x(static_cast<std::size_t>(q.nodes)), w(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
        gsl_integration_glfixed_point(-q.half_width, q.half_width, a, &x[a], &w[a], table);
    }
    gsl_integration_glfixed_table_free(table);

    // odometer over the tensor grid; fixed visiting order keeps the sum reproducible
    std::vector<int> idx(static_cast<std::size_t>(q.cube_dim), 0);
    std::vector<double> t(static_cast<std::size_t>(K), 0.0);
    double total = 0.0;
    while (true) {
        double weight = 1.0;
        for (int a = 0; a < q.cube_dim; ++a) {
            t[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
            weight *= w[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        }
        const Eigen::MatrixXcd R = realize_matrix(eval_t(Fij, t), q.Mr);
        total += weight * R.squaredNorm();

        int a = 0;
        while (a < q.cube_dim && ++idx[static_cast<std::size_t>(a)] == q.nodes) idx[static_cast<std::size_t>(a++)] = 0;
        if (a == q.cube_dim) break;
    }
    return total;
}

}  // namespace nfkp
