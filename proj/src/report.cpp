#include "symreg/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "symreg/errors.hpp"
#include "symreg/format.hpp"

namespace symreg {

std::string rows_csv(const RiskReport& r) {
    std::string out = "scenario,n,trial,estimator,risk\n";
    for (const auto& row : r.rows)
        out += row.scenario + ',' + std::to_string(row.n) + ',' + std::to_string(row.trial) + ',' + row.estimator +
               ',' + format_double(row.risk) + '\n';
    return out;
}

std::string aggregates_csv(const RiskReport& r) {
    std::string out = "scenario,n,estimator,mean_risk,ci_halfwidth\n";
    for (const auto& a : r.aggregates)
        out += a.scenario + ',' + std::to_string(a.n) + ',' + a.estimator + ',' + format_double(a.mean_risk) + ',' +
               format_double(a.ci_halfwidth) + '\n';
    return out;
}

std::string slopes_csv(const RiskReport& r) {
    std::string out = "scenario,estimator,slope\n";
    for (const auto& s : r.slopes) out += s.scenario + ',' + s.estimator + ',' + format_double(s.slope) + '\n';
    return out;
}

std::string selections_csv(const RiskReport& r) {
    std::string out = "scenario,n,trial,chosen,candidates\n";
    for (const auto& s : r.selections)
        out += s.scenario + ',' + std::to_string(s.n) + ',' + std::to_string(s.trial) + ',' + s.chosen + ',' +
               std::to_string(s.candidates) + '\n';
    return out;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string scenario_svg(const RiskReport& r, const std::string& scenario) {
    std::vector<const RiskAggregate*> aggs;
    for (const auto& a : r.aggregates)
        if (a.scenario == scenario) aggs.push_back(&a);
    if (aggs.empty()) return "";

    std::vector<std::string> estimators;
    for (const auto* a : aggs)
        if (std::find(estimators.begin(), estimators.end(), a->estimator) == estimators.end())
            estimators.push_back(a->estimator);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto* a : aggs) {
        xmin = std::min(xmin, std::log10(a->n));
        xmax = std::max(xmax, std::log10(a->n));
        if (a->mean_risk > 0.0) {
            const double lo = a->mean_risk - a->ci_halfwidth > 0.0 ? a->mean_risk - a->ci_halfwidth : a->mean_risk;
            ymin = std::min(ymin, std::log10(lo));
            ymax = std::max(ymax, std::log10(a->mean_risk + a->ci_halfwidth));
        }
    }
    if (ymin > ymax) ymin = -1.0, ymax = 0.0;
    if (xmax - xmin < 1e-9) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin < 1e-9) ymin -= 0.5, ymax += 0.5;
    const double padx = 0.05 * (xmax - xmin), pady = 0.08 * (ymax - ymin);
    xmin -= padx, xmax += padx, ymin -= pady, ymax += pady;

    const double W = 640, H = 440, L = 70, R = 200, T = 40, B = 60;
    const double pw = W - L - R, ph = H - T - B;
    auto sx = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double ly) { return T + (ymax - ly) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 - R / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(scenario)
       << ": mean risk vs n (log-log)</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Ticks at the sample sizes on x, at 1-2-5 decades on y.
    std::vector<int> ns;
    for (const auto* a : aggs)
        if (std::find(ns.begin(), ns.end(), a->n) == ns.end()) ns.push_back(a->n);
    for (int n : ns) {
        const double x = sx(std::log10(n));
        os << "<line x1=\"" << num(x) << "\" y1=\"" << T + ph << "\" x2=\"" << num(x) << "\" y2=\"" << T + ph + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << n << "</text>\n";
    }
    for (int e = static_cast<int>(std::floor(ymin)) - 1; e <= static_cast<int>(std::ceil(ymax)); ++e) {
        for (double m : {1.0, 2.0, 5.0}) {
            const double ly = e + std::log10(m);
            if (ly < ymin || ly > ymax) continue;
            const double y = sy(ly);
            os << "<line x1=\"" << L - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << L + pw << "\" y2=\"" << num(y)
               << "\" stroke=\"#ddd\"/>\n";
            os << "<text x=\"" << L - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << m << "e" << e
               << "</text>\n";
        }
    }
    os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">n</text>\n";
    os << "<text x=\"18\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << T + ph / 2
       << ")\">mean risk</text>\n";

    const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t k = 0; k < estimators.size(); ++k) {
        const char* c = colours[k % 4];
        std::string path;
        for (const auto* a : aggs) {
            if (a->estimator != estimators[k] || !(a->mean_risk > 0.0)) continue;
            const double x = sx(std::log10(a->n));
            const double y = sy(std::log10(a->mean_risk));
            path += (path.empty() ? "M" : " L") + num(x) + ' ' + num(y);
            const double hi = std::log10(a->mean_risk + a->ci_halfwidth);
            const double lo =
                a->mean_risk - a->ci_halfwidth > 0.0 ? std::log10(a->mean_risk - a->ci_halfwidth) : ymin;
            os << "<line x1=\"" << num(x) << "\" y1=\"" << num(sy(lo)) << "\" x2=\"" << num(x) << "\" y2=\""
               << num(sy(hi)) << "\" stroke=\"" << c << "\"/>\n";
            os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
        }
        if (!path.empty())
            os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";

        double slope = std::nan("");
        for (const auto& s : r.slopes)
            if (s.scenario == scenario && s.estimator == estimators[k]) slope = s.slope;
        const double ly = T + 20 + 22.0 * static_cast<double>(k);
        os << "<line x1=\"" << L + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 40 << "\" y2=\"" << ly
           << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << L + pw + 45 << "\" y=\"" << ly + 4 << "\">" << xml_escape(estimators[k])
           << " (slope " << (std::isfinite(slope) ? format_fixed(slope, 3) : std::string("n/a")) << ")</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::filesystem::path> emit_report(const RiskReport& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::string& name, const std::string& text) {
        const auto p = dir / name;
        write_text_file(p, text);
        written.push_back(p);
    };
    put("rows.csv", rows_csv(r));
    put("aggregates.csv", aggregates_csv(r));
    put("slopes.csv", slopes_csv(r));
    put("selections.csv", selections_csv(r));
    std::vector<std::string> scenarios;
    for (const auto& a : r.aggregates)
        if (std::find(scenarios.begin(), scenarios.end(), a.scenario) == scenarios.end())
            scenarios.push_back(a.scenario);
    for (const auto& s : scenarios) put(s + ".svg", scenario_svg(r, s));
    return written;
}

std::vector<RiskRow> parse_rows_csv(const std::string& text) {
    std::vector<RiskRow> rows;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        RiskRow r;
        double n = 0, t = 0;
        if (f.size() != 5 || !parse_double(f[1], n) || !parse_double(f[2], t) || !parse_double(f[4], r.risk))
            throw IoError("malformed rows line " + std::to_string(lineno));
        r.scenario = f[0];
        r.n = static_cast<int>(n);
        r.trial = static_cast<int>(t);
        r.estimator = f[3];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace symreg
