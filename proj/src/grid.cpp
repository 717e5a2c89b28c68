#include "shartree/grid.hpp"

#include <cmath>

namespace sh {

RadialGrid::RadialGrid(double r_max_, int n_) : r_max(r_max_), n(n_), h(r_max_ / n_)
{
    if (!(r_max > 0) || !std::isfinite(r_max)) throw RangeError("grid.r_max must be positive");
    if (n < 16) throw RangeError("grid.n must be at least 16");
    if (n % 2) throw RangeError("grid.n must be even (composite Simpson)");
}

ReducedField::ReducedField(const RadialGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v))
{
    if (static_cast<int>(values.size()) != g.size()) throw RangeError("field size does not match grid");
}

PlainRadialField::PlainRadialField(const RadialGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v))
{
    if (static_cast<int>(values.size()) != g.size()) throw RangeError("field size does not match grid");
}

static void same_grid(const RadialGrid& a, const RadialGrid& b)
{
    if (!(a == b)) throw RangeError("fields live on different grids");
}

ReducedField operator+(const ReducedField& a, const ReducedField& b)
{
    same_grid(a.grid, b.grid);
    ReducedField out(a.grid);
    for (int j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
    return out;
}

ReducedField operator-(const ReducedField& a, const ReducedField& b)
{
    same_grid(a.grid, b.grid);
    ReducedField out(a.grid);
    for (int j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
    return out;
}

ReducedField operator*(cplx c, const ReducedField& a)
{
    ReducedField out(a.grid);
    for (int j = 0; j < a.size(); ++j) out[j] = c * a[j];
    return out;
}

ReducedField conj(const ReducedField& a)
{
    ReducedField out(a.grid);
    for (int j = 0; j < a.size(); ++j) out[j] = std::conj(a[j]);
    return out;
}

std::vector<double> simpson_weights(const RadialGrid& g)
{
    std::vector<double> w(g.size());
    for (int j = 0; j <= g.n; ++j) w[j] = (j % 2 ? 4.0 : 2.0) * g.h / 3.0;
    w[0] = w[g.n] = g.h / 3.0;
    return w;
}

cplx inner_halfline(const ReducedField& a, const ReducedField& b)
{
    same_grid(a.grid, b.grid);
    auto w = simpson_weights(a.grid);
    cplx s = 0;
    for (int j = 0; j < a.size(); ++j) s += w[j] * std::conj(a[j]) * b[j];
    return s;
}

cplx inner(const ReducedField& a, const ReducedField& b) { return 4 * pi * inner_halfline(a, b); }

double max_abs(const std::vector<cplx>& v)
{
    double m = 0;
    for (auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace sh
