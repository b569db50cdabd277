#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace resopt::detail {

/// Symmetric tridiagonal matrix: diag has n entries, off has n - 1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
};

/// a + s * b, entrywise.
SymTridiag combine(const SymTridiag& a, double s, const SymTridiag& b);

/// Number of negative pivots in the LDL^T factorization of a, i.e. the
/// number of negative eigenvalues. Returns -1 on an exact zero pivot so the
/// caller can move its probe.
long negative_pivots(const SymTridiag& a);

/// Solves a x = rhs by Gaussian elimination with partial pivoting (the
/// matrix may be indefinite). Returns false if a pivot vanishes.
/// negative_pivots(a + s b + t c) without forming the sum.
long negative_pivots(const SymTridiag& a, double s, const SymTridiag& b, double t, const SymTridiag& c);

bool solve(const SymTridiag& a, std::span<const double> rhs, std::span<double> x);

std::vector<double> multiply(const SymTridiag& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace resopt::detail
