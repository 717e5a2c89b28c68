#include "shartree/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sh {

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RangeError("cannot write " + path);
    return out;
}

void write_header(std::ofstream& out, const std::vector<std::string>& header)
{
    for (auto& h : header) out << "# " << h << "\n";
}

} // namespace

void write_monitors_csv(const std::string& path, const std::vector<MonitorRecord>& monitors,
                        const std::vector<std::string>& header)
{
    auto out = open_out(path);
    write_header(out, header);
    out << "t,mass,energy,h_s_norm,l2_norm,lr_norm,tail_mass\n";
    for (auto& m : monitors)
        out << fmt(m.t) << ',' << fmt(m.mass) << ',' << fmt(m.energy) << ',' << fmt(m.h_s_norm) << ','
            << fmt(m.l2_norm) << ',' << fmt(m.lr_norm) << ',' << fmt(m.tail_mass) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const std::vector<std::string>& header)
{
    auto out = open_out(path);
    write_header(out, header);
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
        out << '\n';
    }
}

void write_field_csv(const std::string& path, const ReducedField& f, const std::vector<std::string>& header)
{
    auto out = open_out(path);
    write_header(out, header);
    out << "r,re,im\n";
    for (int j = 0; j < f.size(); ++j) out << fmt(f.grid.r(j)) << ',' << fmt(f[j].real()) << ',' << fmt(f[j].imag()) << '\n';
}

void write_json(const std::string& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& text)
{
    auto out = open_out(path);
    out << text;
}

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series, bool logx, bool logy)
{
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 36, mb = 50;
    auto tx = [&](double x) { return logx ? std::log10(x) : x; };
    auto ty = [&](double y) { return logy ? std::log10(y) : y; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if ((logx && !(s.x[i] > 0)) || (logy && !(s.y[i] > 0)) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 >= x0)) x0 = 0, x1 = 1;
    if (!(y1 >= y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) {
        double pad = std::max(1e-12, std::abs(y0) * 0.05);
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (ty(y) - y0) / (y1 - y0) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream os;
    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", ml,
                  mt, W - ml - mr, H - mt - mb);
    os << buf;
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel
       << (logx ? " (log)" : "") << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << H / 2 << ")\">" << ylabel << (logy ? " (log)" : "") << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
        double vx = logx ? std::pow(10, fx) : fx, vy = logy ? std::pow(10, fy) : fy;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\">%.3g</text>\n",
                      px(vx), H - mb + 16, vx);
        os << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">%.3g</text>\n",
                      ml - 4, py(vy) + 4, vy);
        os << buf;
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        auto& s = series[k];
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if ((logx && !(s.x[i] > 0)) || (logy && !(s.y[i] > 0)) || !std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            os << buf;
        }
        os << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">%s</text>\n", ml + 10,
                      mt + 16 + 15 * k, colors[k % 6], s.name.c_str());
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

json number(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

json to_json(const MonitorRecord& m)
{
    return json{{"t", number(m.t)},           {"mass", number(m.mass)},       {"energy", number(m.energy)},
                {"h_s_norm", number(m.h_s_norm)}, {"l2_norm", number(m.l2_norm)}, {"lr_norm", number(m.lr_norm)},
                {"tail_mass", number(m.tail_mass)}};
}

json to_json(const HypothesisReport& rep)
{
    json j{{"s", rep.s}, {"singular_exponent", number(rep.singular_exponent)}, {"nonnegative", rep.nonnegative}};
    json v = json::array();
    for (auto& t : rep.verdicts) {
        json e{{"theorem", t.theorem},
               {"required", t.required},
               {"s_range", t.s_range},
               {"value", number(t.value)},
               {"potential_ok", t.potential_ok},
               {"regularity_ok", t.regularity_ok},
               {"pass", t.pass}};
        if (t.gamma >= 0) e["gamma"] = t.gamma;
        if (t.p > 0) e["p"] = t.p;
        if (!t.note.empty()) e["note"] = t.note;
        v.push_back(e);
    }
    j["verdicts"] = v;
    return j;
}

json to_json(const DecayReport& rep)
{
    json j{{"r", rep.r}, {"slope", number(rep.slope)}, {"target", rep.target}, {"pass", rep.pass}};
    json s = json::array();
    for (std::size_t i = 0; i < rep.times.size(); ++i) s.push_back({number(rep.times[i]), number(rep.norms[i])});
    j["samples"] = s;
    return j;
}

json to_json(const StabilityTable& tab)
{
    static const char* names[] = {"datum", "potential", "both"};
    json rows = json::array();
    for (auto& r : tab.rows)
        rows.push_back({{"eps", r.eps}, {"err_l2", number(r.err_l2)}, {"err_hs", number(r.err_hs)}, {"ratio", number(r.ratio)}});
    return json{{"mode", names[static_cast<int>(tab.mode)]}, {"rows", rows}, {"spread", number(tab.spread)}};
}

json to_json(const GlobalizationReport& rep)
{
    json masses = json::array();
    for (double m : rep.tested_masses) masses.push_back(number(m));
    return json{{"max_violation", number(rep.max_violation)},
                {"inequality_holds", rep.inequality_holds},
                {"initial_h1", number(rep.initial_h1)},
                {"sup_h1", number(rep.sup_h1)},
                {"bound", number(rep.bound)},
                {"bound_ratio", number(rep.bound_ratio)},
                {"bounded", rep.bounded},
                {"termination", to_string(rep.termination)},
                {"tested_masses", masses},
                {"largest_bounded_mass", number(rep.largest_bounded_mass)}};
}

json to_json(const FreeLimitTable& tab)
{
    json rows = json::array();
    for (auto& r : tab.rows) rows.push_back({{"alpha", r.alpha}, {"deviation", number(r.deviation)}});
    return json{{"rows", rows}, {"decreasing", tab.decreasing}};
}

} // namespace sh
