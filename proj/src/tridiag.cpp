#include "tridiag.hpp"

#include <cmath>
#include <utility>

namespace resopt::detail {

SymTridiag combine(const SymTridiag& a, double s, const SymTridiag& b) {
    SymTridiag r = a;
    for (std::size_t i = 0; i < r.diag.size(); ++i) r.diag[i] += s * b.diag[i];
    for (std::size_t i = 0; i < r.off.size(); ++i) r.off[i] += s * b.off[i];
    return r;
}

long negative_pivots(const SymTridiag& a) {
    long count = 0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.diag.size(); ++i) {
        d = (i == 0) ? a.diag[0] : a.diag[i] - a.off[i - 1] * a.off[i - 1] / d;
        if (d == 0.0) return -1;
        if (d < 0.0) ++count;
    }
    return count;
}

long negative_pivots(const SymTridiag& a, double s, const SymTridiag& b, double t, const SymTridiag& c) {
    long count = 0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.diag.size(); ++i) {
        const double di = a.diag[i] + s * b.diag[i] + t * c.diag[i];
        if (i == 0) {
            d = di;
        } else {
            const double e = a.off[i - 1] + s * b.off[i - 1] + t * c.off[i - 1];
            d = di - e * e / d;
        }
        if (d == 0.0) return -1;
        if (d < 0.0) ++count;
    }
    return count;
}

bool solve(const SymTridiag& a, std::span<const double> rhs, std::span<double> x) {
    const std::size_t n = a.diag.size();
    if (n == 0) return true;
    // Row i holds (sub, diag, sup, sup2); sup2 fills in when rows swap.
    std::vector<double> dl(a.off), d(a.diag), du(a.off), du2(n, 0.0);
    std::vector<double> b(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) return false;
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= f * b[i];
        }
    }
    if (d[n - 1] == 0.0) return false;
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n >= 2) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t k = n - 2; k-- > 0;)
        x[k] = (b[k] - du[k] * x[k + 1] - du2[k] * x[k + 2]) / d[k];
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i])) return false;
    return true;
}

std::vector<double> multiply(const SymTridiag& a, std::span<const double> x) {
    const std::size_t n = a.diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = a.diag[i] * x[i];
        if (i > 0) s += a.off[i - 1] * x[i - 1];
        if (i + 1 < n) s += a.off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace resopt::detail
