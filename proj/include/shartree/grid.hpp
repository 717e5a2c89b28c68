#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sh {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// error taxonomy; the runner maps these onto exit codes
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct RegimeError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct WindowError : Error { using Error::Error; };
struct ContractionError : Error { using Error::Error; };

// non-fatal conditions collected by callers that care
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string w) { warnings.push_back(std::move(w)); }
    bool empty() const { return warnings.empty(); }
};

struct RadialGrid {
    double r_max = 0;
    int n = 0;
    double h = 0;

    RadialGrid() = default;
    RadialGrid(double r_max, int n);

    double r(int j) const { return j * h; }
    int size() const { return n + 1; }
    bool operator==(const RadialGrid& o) const { return r_max == o.r_max && n == o.n; }
};

// f(r) = r psi(r)
struct ReducedField {
    RadialGrid grid;
    std::vector<cplx> values;

    ReducedField() = default;
    explicit ReducedField(const RadialGrid& g) : grid(g), values(g.size(), 0.0) {}
    ReducedField(const RadialGrid& g, std::vector<cplx> v);

    cplx& operator[](int j) { return values[j]; }
    const cplx& operator[](int j) const { return values[j]; }
    int size() const { return static_cast<int>(values.size()); }
};

struct PlainRadialField {
    RadialGrid grid;
    std::vector<cplx> values;

    PlainRadialField() = default;
    explicit PlainRadialField(const RadialGrid& g) : grid(g), values(g.size(), 0.0) {}
    PlainRadialField(const RadialGrid& g, std::vector<cplx> v);

    cplx& operator[](int j) { return values[j]; }
    const cplx& operator[](int j) const { return values[j]; }
    int size() const { return static_cast<int>(values.size()); }
};

template <class F>
ReducedField sample_reduced(const RadialGrid& g, F&& f)
{
    ReducedField out(g);
    for (int j = 0; j <= g.n; ++j) out[j] = f(g.r(j));
    return out;
}

template <class F>
PlainRadialField sample_plain(const RadialGrid& g, F&& f)
{
    PlainRadialField out(g);
    for (int j = 0; j <= g.n; ++j) out[j] = f(g.r(j));
    return out;
}

ReducedField operator+(const ReducedField& a, const ReducedField& b);
ReducedField operator-(const ReducedField& a, const ReducedField& b);
ReducedField operator*(cplx c, const ReducedField& a);
ReducedField conj(const ReducedField& a);

// composite Simpson weights on nodes 0..n (n even)
std::vector<double> simpson_weights(const RadialGrid& g);

// half-line inner product int conj(a) b dr
cplx inner_halfline(const ReducedField& a, const ReducedField& b);
// 3D inner product <a, b> = 4 pi int conj(f_a) f_b dr
cplx inner(const ReducedField& a, const ReducedField& b);

double max_abs(const std::vector<cplx>& v);

} // namespace sh
