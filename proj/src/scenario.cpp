// scenario.cpp: Scenario files for the command-line front end

#include "nonmarkov/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nonmarkov/error.hpp"

namespace nonmarkov::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"kind", "eta", "omega0", "xi0", "kappa", "omega_cut", "exponent", "file"}},
        {"units", {"frequency"}},
        {"system", {"omega_c"}},
        {"bath", {"theta", "nbar"}},
        {"grid", {"dt", "horizon"}},
        {"cat", {"alpha", "alpha_im", "n_max"}},
        {"frames", {"times", "points"}},
        {"sweep", {"eta"}},
        {"output", {"dir", "stride"}},
    };
    return keys;
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw Error(ErrorKind::Parse, key + ": " + what);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        fail(key, "expected a finite number, got '" + t + "'");
    }
    return value;
}

std::size_t to_count(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        fail(key, "expected a non-negative integer, got '" + t + "'");
    }
    return value;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        if (auto item = trim(text.substr(start, end - start)); !item.empty()) items.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return items;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> text(const std::string& key) const {
        if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return trim(*v);
        return std::nullopt;
    }
    bool has(const std::string& key) const { return text(key).has_value(); }
    std::optional<double> number(const std::string& key) const {
        if (auto t = text(key)) return to_number(key, *t);
        return std::nullopt;
    }
    double number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }
    std::size_t count(const std::string& key, std::size_t fallback) const {
        if (auto t = text(key)) return to_count(key, *t);
        return fallback;
    }

private:
    const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
    const auto& keys = schema();
    for (const auto& [section, body] : tree) {
        const auto it = keys.find(section);
        if (it == keys.end()) {
            if (body.empty()) fail(section, "unknown key outside any section");
            fail(section, "unknown section");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) fail(section + "." + key, "unknown key");
        }
    }
}

// Frame time: a number in time units, or a multiple of T0 ("2 T0", "0.5T0", "T0").
double frame_time(const std::string& item, double time_unit, double period) {
    const std::string key = "frames.times";
    if (item.size() >= 2 && item.compare(item.size() - 2, 2, "T0") == 0) {
        const std::string factor = trim(std::string_view(item).substr(0, item.size() - 2));
        return (factor.empty() ? 1.0 : to_number(key, factor)) * period;
    }
    return to_number(key, item) * time_unit;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string join17(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(xs[i]);
    }
    return out;
}

} // namespace

double Scenario::period() const {
    const double w = model.waveguide() ? model.waveguide()->omega0 : omega_c;
    if (!(w > 0.0)) throw Error(ErrorKind::Domain, "T0 = 2pi/omega needs a positive reference frequency");
    return 2.0 * std::numbers::pi / w;
}

Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    check_keys(tree);
    const Reader r(tree);
    Scenario sc;

    const std::string units = r.text("units.frequency").value_or("xi0");
    if (units != "xi0" && units != "absolute") fail("units.frequency", "expected 'xi0' or 'absolute', got '" + units + "'");

    const std::string kind = r.text("model.kind").value_or("waveguide");
    const auto forbid = [&](std::initializer_list<const char*> names) {
        for (const char* n : names) {
            const std::string key = std::string("model.") + n;
            if (r.has(key)) fail(key, "not used by model kind '" + kind + "'");
        }
    };
    // Frequencies in xi0 units are multiplied by f; times are divided by it.
    double f = 1.0;
    try {
        if (kind == "waveguide") {
            forbid({"kappa", "omega_cut", "exponent", "file"});
            spectral::Waveguide w;
            w.xi0 = r.number("model.xi0", 1.0);
            if (!(w.xi0 > 0.0)) fail("model.xi0", "must be positive");
            if (units == "xi0") f = w.xi0;
            w.eta = r.number("model.eta", 0.0);
            w.omega0 = f * r.number("model.omega0", 0.0);
            sc.model = spectral::SpectralModel(w);
        } else if (kind == "ohmic") {
            forbid({"eta", "omega0", "xi0", "file"});
            spectral::OhmicFamily o;
            o.kappa = r.number("model.kappa", 0.0);
            o.omega_cut = r.number("model.omega_cut", 1.0);
            o.exponent = r.number("model.exponent", 1.0);
            sc.model = spectral::SpectralModel(o);
        } else if (kind == "tabulated") {
            forbid({"eta", "omega0", "xi0", "kappa", "omega_cut", "exponent"});
            const auto file = r.text("model.file");
            if (!file || file->empty()) fail("model.file", "required for tabulated models");
            std::filesystem::path p(*file);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            sc.table_file = std::filesystem::absolute(p).lexically_normal();
            sc.model = spectral::SpectralModel::load_tabulated(sc.table_file);
        } else {
            fail("model.kind", "expected waveguide, ohmic or tabulated, got '" + kind + "'");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Domain) fail("model", e.what());
        throw;
    }

    const auto omega_c = r.number("system.omega_c");
    if (!omega_c) fail("system.omega_c", "required");
    sc.omega_c = f * *omega_c;

    const auto theta = r.number("bath.theta");
    const auto nbar = r.number("bath.nbar");
    if (theta && nbar) fail("bath.nbar", "contradicts bath.theta; give only one");
    if (theta) {
        if (!(*theta >= 0.0)) fail("bath.theta", "must be >= 0");
        sc.bath = spectral::BathSpec(f * *theta);
    } else if (nbar) {
        if (!(*nbar >= 0.0)) fail("bath.nbar", "must be >= 0");
        const double ref = sc.model.waveguide() ? sc.model.waveguide()->omega0 : sc.omega_c;
        if (!(ref > 0.0)) fail("bath.nbar", "needs a positive reference frequency");
        sc.bath = spectral::BathSpec::from_occupation(ref, *nbar);
    }

    if (const auto dt = r.number("grid.dt")) {
        if (!(*dt > 0.0)) fail("grid.dt", "must be positive");
        sc.dt = *dt / f;
    } else {
        sc.dt = 1e-3 / f;
    }
    if (const auto h = r.number("grid.horizon")) {
        if (!(*h > 0.0)) fail("grid.horizon", "must be positive");
        sc.horizon = *h / f;
    } else {
        sc.horizon = 20.0 / f;
    }
    if (sc.dt > sc.horizon) fail("grid.dt", "exceeds grid.horizon");

    sc.alpha = {r.number("cat.alpha", 1.0), r.number("cat.alpha_im", 0.0)};
    sc.n_max = r.count("cat.n_max", 25);
    if (sc.n_max < 6) fail("cat.n_max", "must be at least 6");

    if (const auto times = r.text("frames.times")) {
        const double T0 = sc.period();
        for (const auto& item : split_list(*times)) {
            const double t = frame_time(item, 1.0 / f, T0);
            if (t < 0.0) fail("frames.times", "negative time '" + item + "'");
            if (t > sc.horizon * (1.0 + 1e-12)) fail("frames.times", "time '" + item + "' exceeds grid.horizon");
            sc.frame_times.push_back(std::min(t, sc.horizon));
        }
        if (!std::is_sorted(sc.frame_times.begin(), sc.frame_times.end())) fail("frames.times", "must be ascending");
    }
    sc.frame_points = r.count("frames.points", 201);
    if (sc.frame_points < 2) fail("frames.points", "must be at least 2");

    if (const auto etas = r.text("sweep.eta")) {
        for (const auto& item : split_list(*etas)) {
            const double eta = to_number("sweep.eta", item);
            if (eta < 0.0) fail("sweep.eta", "negative coupling '" + item + "'");
            sc.sweep_etas.push_back(eta);
        }
    }

    sc.output_dir = r.text("output.dir").value_or("out");
    sc.stride = r.count("output.stride", 1);
    if (sc.stride == 0) fail("output.stride", "must be positive");
    return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open scenario " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    return parse_scenario_text(body.str(), path.parent_path());
}

std::string echo_scenario(const Scenario& sc) {
    std::ostringstream os;
    os << "[units]\nfrequency = absolute\n\n[model]\n";
    if (const auto* w = sc.model.waveguide()) {
        os << "kind = waveguide\neta = " << fmt17(w->eta) << "\nomega0 = " << fmt17(w->omega0)
           << "\nxi0 = " << fmt17(w->xi0) << '\n';
    } else if (const auto* o = sc.model.ohmic()) {
        os << "kind = ohmic\nkappa = " << fmt17(o->kappa) << "\nomega_cut = " << fmt17(o->omega_cut)
           << "\nexponent = " << fmt17(o->exponent) << '\n';
    } else {
        os << "kind = tabulated\nfile = " << sc.table_file.string() << '\n';
    }
    os << "\n[system]\nomega_c = " << fmt17(sc.omega_c) << '\n';
    os << "\n[bath]\ntheta = " << fmt17(sc.bath.theta) << '\n';
    os << "\n[grid]\ndt = " << fmt17(sc.dt) << "\nhorizon = " << fmt17(sc.horizon) << '\n';
    os << "\n[cat]\nalpha = " << fmt17(sc.alpha.real()) << "\nalpha_im = " << fmt17(sc.alpha.imag())
       << "\nn_max = " << sc.n_max << '\n';
    os << "\n[frames]\n";
    if (!sc.frame_times.empty()) os << "times = " << join17(sc.frame_times) << '\n';
    os << "points = " << sc.frame_points << '\n';
    if (!sc.sweep_etas.empty()) os << "\n[sweep]\neta = " << join17(sc.sweep_etas) << '\n';
    os << "\n[output]\ndir = " << sc.output_dir.string() << "\nstride = " << sc.stride << '\n';
    return os.str();
}

} // namespace nonmarkov::cli
