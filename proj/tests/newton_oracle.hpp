#pragma once

// Reference root finder used by the tests: damped Newton in long double on
// the polynomial's midpoint coefficients, with its own evaluation and
// elimination code so it shares nothing with the interval solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "hsroot/poly.hpp"

namespace oracle {

using Vec = std::vector<long double>;

struct Term {
    long double coeff;
    std::vector<unsigned> exps;
};

class System {
public:
    explicit System(const hsroot::PolySystem& s) : n_(s.dimension()) {
        for (const auto& eq : s.equations) {
            std::vector<Term> terms;
            for (const auto& t : eq.terms()) {
                const long double c = (static_cast<long double>(t.coeff.lo()) + t.coeff.hi()) / 2;
                terms.push_back({c, t.exponents});
            }
            eqs_.push_back(std::move(terms));
        }
    }

    std::size_t dimension() const { return n_; }

    Vec residual(const Vec& x) const {
        Vec f(n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (const auto& t : eqs_[i]) {
                long double v = t.coeff;
                for (std::size_t j = 0; j < n_; ++j)
                    for (unsigned e = 0; e < t.exps[j]; ++e) v *= x[j];
                f[i] += v;
            }
        return f;
    }

    // Row-major n×n Jacobian by the power rule on each term.
    std::vector<long double> jacobian(const Vec& x) const {
        std::vector<long double> jac(n_ * n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (const auto& t : eqs_[i])
                for (std::size_t k = 0; k < n_; ++k) {
                    if (t.exps[k] == 0) continue;
                    long double v = t.coeff * t.exps[k];
                    for (std::size_t j = 0; j < n_; ++j) {
                        const unsigned e = j == k ? t.exps[j] - 1 : t.exps[j];
                        for (unsigned p = 0; p < e; ++p) v *= x[j];
                    }
                    jac[i * n_ + k] += v;
                }
        return jac;
    }

private:
    std::size_t n_;
    std::vector<std::vector<Term>> eqs_;
};

inline long double norm_inf(const Vec& v) {
    long double m = 0;
    for (auto a : v) m = std::max(m, std::fabs(a));
    return m;
}

// Solves a·x = b in place by Gaussian elimination with partial pivoting.
inline std::optional<Vec> linear_solve(std::vector<long double> a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
        if (a[p * n + c] == 0) return std::nullopt;
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
            std::swap(b[p], b[c]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const long double f = a[r * n + c] / a[c * n + c];
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    Vec x(n);
    for (std::size_t r = n; r-- > 0;) {
        long double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
        x[r] = s / a[r * n + r];
    }
    return x;
}

struct NewtonResult {
    Vec x;
    long double residual;
    bool converged;
};

// Levenberg-Marquardt step (JᵀJ + λI)δ = -Jᵀf, used where J is singular.
inline std::optional<Vec> regularised_step(const std::vector<long double>& jac, const Vec& f, long double lambda) {
    const std::size_t n = f.size();
    std::vector<long double> a(n * n, 0);
    Vec rhs(n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t k = 0; k < n; ++k) a[r * n + c] += jac[k * n + r] * jac[k * n + c];
        }
    for (std::size_t r = 0; r < n; ++r) {
        a[r * n + r] += lambda;
        for (std::size_t k = 0; k < n; ++k) rhs[r] -= jac[k * n + r] * f[k];
    }
    return linear_solve(std::move(a), std::move(rhs));
}

// Damped Newton: halve the step until the residual decreases. When the
// Newton direction fails (singular Jacobian or no decrease), fall back to a
// regularised step.
inline NewtonResult newton(const System& sys, Vec x, int max_iter = 100, long double tol = 1e-15L) {
    Vec f = sys.residual(x);
    long double r = norm_inf(f);
    auto try_direction = [&](const Vec& step) {
        long double t = 1;
        for (int k = 0; k < 40; ++k, t /= 2) {
            Vec y = x;
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += t * step[i];
            Vec fy = sys.residual(y);
            const long double ry = norm_inf(fy);
            if (std::isfinite(ry) && ry < r) {
                x = std::move(y);
                f = std::move(fy);
                r = ry;
                return true;
            }
        }
        return false;
    };
    for (int it = 0; it < max_iter && r > tol; ++it) {
        const auto jac = sys.jacobian(x);
        Vec neg(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) neg[i] = -f[i];
        const auto step = linear_solve(jac, neg);
        if (step && try_direction(*step)) continue;
        long double scale = 0;
        for (auto v : jac) scale = std::max(scale, std::fabs(v));
        bool moved = false;
        for (long double lambda = 1e-12L * (scale * scale + 1); !moved && lambda < 1e6L; lambda *= 100) {
            const auto lm = regularised_step(jac, f, lambda);
            moved = lm && try_direction(*lm);
        }
        if (!moved) break;
    }
    return {x, r, r < 1e-12L};
}

// Distinct converged roots inside `box` from uniformly random starts.
inline std::vector<Vec> sample_roots(const hsroot::PolySystem& s, int starts, unsigned seed,
                                     long double merge_tol = 1e-7L) {
    System sys(s);
    std::mt19937_64 rng(seed);
    std::vector<Vec> roots;
    const auto& box = s.initial_box;
    for (int k = 0; k < starts; ++k) {
        Vec x(box.size());
        for (std::size_t j = 0; j < box.size(); ++j) {
            std::uniform_real_distribution<double> u(box[j].lo(), box[j].hi());
            x[j] = u(rng);
        }
        auto res = newton(sys, x);
        if (!res.converged) continue;
        bool inside = true;
        for (std::size_t j = 0; j < box.size(); ++j)
            inside = inside && res.x[j] >= box[j].lo() && res.x[j] <= box[j].hi();
        if (!inside) continue;
        bool seen = false;
        for (const auto& r : roots) {
            Vec d(r.size());
            for (std::size_t j = 0; j < r.size(); ++j) d[j] = r[j] - res.x[j];
            if (norm_inf(d) < merge_tol) seen = true;
        }
        if (!seen) roots.push_back(res.x);
    }
    return roots;
}

}  // namespace oracle
