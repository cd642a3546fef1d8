#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"
#include "toxconv/kernels.hpp"

namespace toxconv::metrics {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (a, b) below x.
std::size_t sturm_count(const std::vector<double>& a, const std::vector<double>& b, double x) {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
        d = a[i] - x - (i == 0 ? 0.0 : off / d);
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

double smallest_tridiagonal_eigenvalue(const std::vector<double>& a, const std::vector<double>& b) {
    double lo = a[0], hi = a[0];
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i < b.size() ? std::abs(b[i]) : 0.0);
        lo = std::min(lo, a[i] - r);
        hi = std::max(hi, a[i] + r);
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(a, b, mid) >= 1) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double algebraic_connectivity(const UGraph& g) {
    const auto comps = connected_components(g);
    std::size_t best = 0;
    for (std::size_t i = 1; i < comps.size(); ++i)
        if (comps[i].size() > comps[best].size()) best = i;
    if (comps.empty() || comps[best].size() < 2) throw SizeTooSmall("largest component has fewer than two nodes");
    const UGraph h = g.induced(comps[best]);
    const std::size_t n = h.size();
    if (n == 2) return 2.0;

    // Laplacian in CSR form.
    std::vector<std::uint32_t> row_ptr{0}, col;
    std::vector<double> val;
    for (NodeId u = 0; u < n; ++u) {
        col.push_back(u);
        val.push_back(static_cast<double>(h.degree(u)));
        for (NodeId v : h.adj(u)) {
            col.push_back(v);
            val.push_back(-1.0);
        }
        row_ptr.push_back(static_cast<std::uint32_t>(col.size()));
    }
    const kernels::CsrView lap{row_ptr, col, val};

    const double nd = static_cast<double>(n);
    auto deflate = [&](std::vector<double>& x) {
        const double mean = kernels::sum(x) / nd;
        for (double& v : x) v -= mean;
    };

    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::vector<double>> basis;
    std::vector<double> q(n), w(n);
    for (double& v : q) v = unif(rng);
    deflate(q);
    kernels::scale(1.0 / std::sqrt(kernels::dot(q, q)), q);

    std::vector<double> alpha, beta;
    double prev = std::numeric_limits<double>::infinity();
    int stable = 0;
    double lambda = 0.0;
    const std::size_t max_steps = n - 1;  // dimension of the deflated space
    for (std::size_t j = 0; j < max_steps; ++j) {
        basis.push_back(q);
        kernels::spmv(lap, q, w);
        const double a = kernels::dot(q, w);
        alpha.push_back(a);
        // Full reorthogonalization, twice, against the Krylov basis and 1.
        for (int pass = 0; pass < 2; ++pass) {
            deflate(w);
            for (const auto& b : basis) kernels::axpy(-kernels::dot(b, w), b, w);
        }
        lambda = smallest_tridiagonal_eigenvalue(alpha, beta);
        const double bnorm = std::sqrt(kernels::dot(w, w));
        if (bnorm < 1e-10) break;
        if (std::abs(prev - lambda) < 1e-13 * std::max(1.0, std::abs(lambda))) {
            if (++stable >= 5) break;
        } else {
            stable = 0;
        }
        prev = lambda;
        beta.push_back(bnorm);
        q = w;
        kernels::scale(1.0 / bnorm, q);
    }
    return std::max(0.0, lambda);
}

double algebraic_connectivity(const Digraph& g) { return algebraic_connectivity(UGraph::from(g)); }

}  // namespace toxconv::metrics
