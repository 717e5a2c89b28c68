#include "shartree/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

namespace sh {

namespace {

using Cols2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

Eigen::Map<const Cols2> as_cols(const cplx* p, int n)
{
    return Eigen::Map<const Cols2>(reinterpret_cast<const double*>(p), n, 2);
}

} // namespace

double RobinTransform::phase(double k) const
{
    if (op_.is_friedrichs()) return 0.0;
    return std::atan2(k, op_.beta());
}

RobinTransform::RobinTransform(const RadialGrid& grid, const PointInteraction& op, double k_max,
                               double completeness_tol)
    : grid_(grid), op_(op)
{
    const double R = grid.r_max, h = grid.h;
    const double nyquist = pi / h;
    if (k_max <= 0) k_max = nyquist;
    if (k_max > nyquist * (1 + 1e-12)) throw ResolutionError("k_max exceeds the grid Nyquist limit pi/h");

    j0_ = op.is_friedrichs() ? 1 : 0;
    nodes_ = grid.n - j0_;
    const double beta = op.beta();
    bound_ = !op.is_friedrichs() && beta < 0;
    if (bound_ && -beta * R < 30) throw ResolutionError("bound state not contained in the box (4 pi |alpha| r_max < 30)");

    // continuum box modes k R + delta(k) = m pi
    std::vector<double> ks;
    int m = bound_ ? 2 : 1;
    int want = nodes_ - (bound_ ? 1 : 0);
    for (; static_cast<int>(ks.size()) < want; ++m) {
        double k;
        if (op.is_friedrichs()) {
            k = m * pi / R;
        } else {
            double lo = (beta >= 0 ? m - 0.5 : m - 1.0) * pi / R;
            double hi = (beta >= 0 ? m : m - 0.5) * pi / R;
            auto g = [&](double x) { return x * R + phase(x) - m * pi; };
            if (beta == 0) {
                k = lo;
            } else {
                boost::uintmax_t it = 200;
                auto res = boost::math::tools::toms748_solve(
                    g, std::max(lo, 1e-300), hi, boost::math::tools::eps_tolerance<double>(52), it);
                k = 0.5 * (res.first + res.second);
            }
        }
        ks.push_back(k);
    }
    int keep = 0;
    while (keep < static_cast<int>(ks.size()) && ks[keep] <= k_max * (1 + 1e-12)) ++keep;
    ks.resize(keep);

    const int M = keep + (bound_ ? 1 : 0);
    Eigen::MatrixXd S(nodes_, M);
    auto sw = simpson_weights(grid);
    d_.assign(sw.begin() + j0_, sw.begin() + j0_ + nodes_);
    int col = 0;
    if (bound_) {
        double kap = -beta;
        for (int j = 0; j < nodes_; ++j) S(j, 0) = std::exp(-kap * grid.r(j + j0_));
        ev_.push_back(-kap * kap);
        W_.push_back(1.0);
        col = 1;
    }
    for (double k : ks) {
        double dl = phase(k);
        for (int j = 0; j < nodes_; ++j) S(j, col) = std::sin(k * grid.r(j + j0_) + dl);
        double N = R / 2 + std::sin(2 * dl) / (4 * k);
        W_.push_back(pi / (2 * N));
        ev_.push_back(k * k);
        k_.push_back(k);
        kw_.push_back(W_.back());
        ++col;
    }

    Eigen::VectorXd D = Eigen::Map<Eigen::VectorXd>(d_.data(), nodes_);
    Eigen::MatrixXd G = S.transpose() * D.asDiagonal() * S;
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw ResolutionError("sampled eigenmodes are numerically dependent");
    // Q = S L^{-T}: Gram-Schmidt in order of increasing eigenvalue
    Q_ = llt.matrixU().solve<Eigen::OnTheRight>(S);
    QtD_ = Q_.transpose() * D.asDiagonal();

    Eigen::MatrixXd I = QtD_ * Q_;
    defect_ = (I - Eigen::MatrixXd::Identity(M, M)).cwiseAbs().maxCoeff();
    if (defect_ > completeness_tol) throw ResolutionError("transform completeness defect above tolerance");
}

Eigen::MatrixXd RobinTransform::eigen_matrix() const
{
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(grid_.size(), modes());
    for (int m = 0; m < modes(); ++m)
        for (int j = 0; j < nodes_; ++j) E(j + j0_, m) = Q_(j, m) / std::sqrt(W_[m]);
    return E;
}

std::vector<cplx> RobinTransform::coefficients(const ReducedField& f) const
{
    if (!(f.grid == grid_)) throw RangeError("field and transform grids differ");
    Cols2 c = QtD_ * as_cols(f.values.data() + j0_, nodes_);
    std::vector<cplx> out(modes());
    for (int m = 0; m < modes(); ++m) out[m] = cplx(c(m, 0), c(m, 1));
    return out;
}

ReducedField RobinTransform::synthesize(const std::vector<cplx>& c) const
{
    Cols2 v = Q_ * as_cols(c.data(), modes());
    ReducedField out(grid_);
    for (int j = 0; j < nodes_; ++j) out[j + j0_] = cplx(v(j, 0), v(j, 1));
    return out;
}

TransformPtr build_transform(const RadialGrid& grid, const PointInteraction& op, double k_max)
{
    return std::make_shared<const RobinTransform>(grid, op, k_max);
}

double spectral_tail_mass(const std::vector<cplx>& c, const RobinTransform& t, double frac)
{
    double tot = 0, tail = 0;
    int off = t.has_bound_state() ? 1 : 0;
    for (int m = 0; m < t.modes(); ++m) {
        double a = std::norm(c[m]);
        tot += a;
        if (m >= off && t.k_nodes()[m - off] > frac * t.k_max()) tail += a;
    }
    return tot > 0 ? tail / tot : 0.0;
}

SpectralField forward(const ReducedField& psi, const TransformPtr& t, Diagnostics* diag)
{
    SpectralField F;
    F.transform = t;
    auto c = t->coefficients(psi);
    F.tail_mass = spectral_tail_mass(c, *t);
    if (diag && F.tail_mass > 0.01) diag->warn("spectral tail mass above 1%: field not band-limited");
    F.coeffs.resize(c.size());
    for (int m = 0; m < t->modes(); ++m) F.coeffs[m] = c[m] / std::sqrt(t->weight(m));
    return F;
}

ReducedField inverse(const SpectralField& F)
{
    const auto& t = *F.transform;
    std::vector<cplx> c(F.coeffs.size());
    for (int m = 0; m < t.modes(); ++m) c[m] = F.coeffs[m] * std::sqrt(t.weight(m));
    return t.synthesize(c);
}

double parseval_sum(const SpectralField& F)
{
    double s = 0;
    for (int m = 0; m < F.transform->modes(); ++m) s += F.transform->weight(m) * std::norm(F.coeffs[m]);
    return s;
}

ReducedField apply_multiplier(const ReducedField& psi, const RobinTransform& t, const std::function<cplx(double)>& m)
{
    auto c = t.coefficients(psi);
    const auto& ev = t.eigenvalues();
    for (int i = 0; i < t.modes(); ++i) c[i] *= m(ev[i]);
    return t.synthesize(c);
}

ReducedField fractional_apply(const ReducedField& psi, const RobinTransform& t, double s, bool shifted, double lambda)
{
    if (s < -2 || s > 2) throw RangeError("fractional power needs s in [-2, 2]");
    if (lambda < 0) throw RangeError("fractional shift needs lambda >= 0");
    auto c = t.coefficients(psi);
    const auto& ev = t.eigenvalues();
    if (s == 0) return t.synthesize(c);
    if (!shifted && t.has_bound_state()) throw DomainError("unshifted fractional power undefined with a bound state");
    if (shifted && t.has_bound_state() && lambda + ev[0] <= 0)
        throw DomainError("shift does not clear the bound state");
    if (s < 0 && !shifted && t.modes() >= 2) {
        // u^(0) by linear extrapolation from the first two modes
        double k1 = t.k_nodes()[0], k2 = t.k_nodes()[1];
        cplx u1 = c[0] / std::sqrt(t.weight(0)), u2 = c[1] / std::sqrt(t.weight(1));
        cplx u0 = u1 - k1 * (u2 - u1) / (k2 - k1);
        double umax = 0;
        for (int m = 0; m < t.modes(); ++m) umax = std::max(umax, std::abs(c[m]) / std::sqrt(t.weight(m)));
        if (std::abs(u0) > 1e-3 * umax) throw DomainError("negative power of a field with u^(0) != 0");
    }
    for (int i = 0; i < t.modes(); ++i) {
        double base = shifted ? lambda + ev[i] : ev[i];
        c[i] *= std::pow(base, s / 2);
    }
    return t.synthesize(c);
}

double perturbed_norm_from_coefficients(const std::vector<cplx>& c, const RobinTransform& t, double s)
{
    const auto& ev = t.eigenvalues();
    double acc = 0;
    for (int i = 0; i < t.modes(); ++i) {
        double b = 1 + ev[i];
        if (b <= 0) throw DomainError("1 - Delta_alpha is not positive on this transform");
        acc += std::pow(b, s) * std::norm(c[i]);
    }
    return std::sqrt(acc);
}

double perturbed_norm(const ReducedField& psi, const RobinTransform& t, double s)
{
    return perturbed_norm_from_coefficients(t.coefficients(psi), t, s);
}

double spectral_form(const std::vector<cplx>& c, const RobinTransform& t)
{
    const auto& ev = t.eigenvalues();
    double acc = 0;
    for (int i = 0; i < t.modes(); ++i) acc += ev[i] * std::norm(c[i]);
    return 4 * pi * acc;
}

void reject_transition(double s)
{
    if (s == 0.5 || s == 1.5) throw RegimeError("s = 1/2 and s = 3/2 are transition regularities");
}

EquivalenceBand norm_equivalence_report(const std::vector<DecomposedState>& samples, const RobinTransform& t,
                                        double s, const RobinTransform* friedrichs)
{
    reject_transition(s);
    if (s < 0 || s > 2) throw RangeError("norm equivalence needs s in [0, 2]");
    std::unique_ptr<RobinTransform> own;
    if (!friedrichs || !friedrichs->op().is_friedrichs()) {
        own = std::make_unique<RobinTransform>(t.grid(), PointInteraction::friedrichs());
        friedrichs = own.get();
    }
    EquivalenceBand band;
    for (const auto& st : samples) {
        auto psi = recompose(st);
        double lhs = perturbed_norm(psi, t, s);
        double rhs;
        if (s < 0.5) {
            rhs = perturbed_norm(psi, *friedrichs, s);
        } else if (s < 1.5) {
            double kterm = std::abs(st.kappa) == 0 ? 0.0 : (1 + t.op().alpha()) * std::abs(st.kappa);
            rhs = perturbed_norm(st.phi, *friedrichs, s) + kterm;
        } else {
            rhs = perturbed_norm(st.phi, *friedrichs, s);
        }
        band.ratios.push_back(lhs / rhs);
    }
    if (!band.ratios.empty()) {
        band.ratio_min = *std::min_element(band.ratios.begin(), band.ratios.end());
        band.ratio_max = *std::max_element(band.ratios.begin(), band.ratios.end());
    }
    return band;
}

GreenCheck fractional_green_check(const RobinTransform& t, double lambda, double s, double r_fit_max)
{
    if (!(s > 0 && s <= 2)) throw RangeError("green check needs s in (0, 2]");
    std::unique_ptr<RobinTransform> own;
    const RobinTransform* F = &t;
    if (!t.op().is_friedrichs()) {
        own = std::make_unique<RobinTransform>(t.grid(), PointInteraction::friedrichs());
        F = own.get();
    }
    const auto& g = t.grid();
    auto G = green_field(g, lambda);
    auto D = fractional_apply(G, *F, s, false);
    if (r_fit_max <= 0) r_fit_max = g.r_max / 2;
    GreenCheck out;
    double sl = std::sqrt(lambda);
    for (int j = 1; j <= g.n && g.r(j) <= r_fit_max; ++j) {
        double r = g.r(j);
        double bound = std::exp(-sl * r) / r + std::exp(-sl * r) / std::pow(r, 1 + s);
        double v = std::abs(D[j]) / r / bound;
        if (v > out.c_fit) {
            out.c_fit = v;
            out.r_at_max = r;
        }
    }
    return out;
}

} // namespace sh
