#include "kschemo/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "kschemo/bifurcation.hpp"
#include "kschemo/eigenbasis.hpp"
#include "kschemo/errors.hpp"

namespace kschemo::harness {

std::string_view to_string(InitKind kind) {
    switch (kind) {
        case InitKind::cosine: return "cosine";
        case InitKind::gaussian: return "gaussian";
        case InitKind::noise: return "noise";
        case InitKind::branch_seed: return "branch_seed";
    }
    return "?";
}

RunControls ScenarioConfig::controls() const {
    RunControls c;
    c.dt_max = run.dt_max;
    c.t_max = run.t_max;
    c.tol_ss = run.tol_ss;
    c.blow_up_cap = run.blow_up_cap;
    c.sample_every = run.sample_every;
    c.snapshot_times = output.times;
    return c;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    const Entry* find(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    const Entry& require(const std::string& key) {
        const Entry* e = find(key);
        if (e == nullptr) throw ConfigError(0, "missing required key '" + key + "'");
        return *e;
    }

    static double to_number(const Entry& e, const std::string& key) {
        std::string_view text = e.value;
        double scale = 1.0;
        if (text == "pi") return std::numbers::pi;
        if (text.size() > 3 && text.substr(text.size() - 3) == "*pi") {
            scale = std::numbers::pi;
            text = trim(text.substr(0, text.size() - 3));
        }
        double v = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
            throw ConfigError(e.line, "malformed number for '" + key + "': '" + e.value + "'");
        }
        return v * scale;
    }

    double number(const std::string& key, double fallback) {
        const Entry* e = find(key);
        return e == nullptr ? fallback : to_number(*e, key);
    }

    double required_number(const std::string& key) { return to_number(require(key), key); }

    double positive(const std::string& key, const std::string& label, std::optional<double> fallback = {}) {
        const Entry* e = find(key);
        if (e == nullptr) {
            if (!fallback) throw ConfigError(0, "missing required key '" + key + "'");
            return *fallback;
        }
        const double v = to_number(*e, key);
        if (!(v > 0.0)) throw ConfigError(e->line, label + " must be positive");
        return v;
    }

    double nonnegative(const std::string& key, const std::string& label) {
        const Entry& e = require(key);
        const double v = to_number(e, key);
        if (!(v >= 0.0)) throw ConfigError(e.line, label + " must be nonnegative");
        return v;
    }

    long integer(const std::string& key, long fallback) {
        const Entry* e = find(key);
        if (e == nullptr) return fallback;
        long v = 0;
        const auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
        if (res.ec != std::errc{} || res.ptr != e->value.data() + e->value.size()) {
            throw ConfigError(e->line, "malformed integer for '" + key + "': '" + e->value + "'");
        }
        return v;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        const Entry* e = find(key);
        if (e == nullptr) return fallback;
        std::uint64_t v = 0;
        const auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
        if (res.ec != std::errc{} || res.ptr != e->value.data() + e->value.size()) {
            throw ConfigError(e->line, "malformed unsigned integer for '" + key + "': '" + e->value + "'");
        }
        return v;
    }

    bool boolean(const std::string& key, bool fallback) {
        const Entry* e = find(key);
        if (e == nullptr) return fallback;
        if (e->value == "true") return true;
        if (e->value == "false") return false;
        throw ConfigError(e->line, "expected true or false for '" + key + "'");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Entry* e = find(key);
        return e == nullptr ? fallback : e->value;
    }

    std::vector<double> number_list(const std::string& key) {
        std::vector<double> out;
        const Entry* e = find(key);
        if (e == nullptr || trim(e->value).empty()) return out;
        std::string_view rest = e->value;
        while (true) {
            const auto comma = rest.find(',');
            Entry item{std::string(trim(rest.substr(0, comma))), e->line, true};
            out.push_back(to_number(item, key));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_) {
            if (!e.used) throw ConfigError(e.line, "unknown key '" + key + "'");
        }
    }

private:
    std::map<std::string, Entry> entries_;
};

InitKind parse_init_kind(const Entry& e) {
    for (InitKind k : {InitKind::cosine, InitKind::gaussian, InitKind::noise, InitKind::branch_seed}) {
        if (e.value == to_string(k)) return k;
    }
    throw ConfigError(e.line, "unknown initial-data family '" + e.value + "'");
}

std::vector<std::string_view> init_keys(InitKind kind) {
    switch (kind) {
        case InitKind::cosine: return {"amp", "kx", "ky", "px", "py"};
        case InitKind::gaussian: return {"amp", "x0", "y0", "width"};
        case InitKind::noise: return {"amp", "seed"};
        case InitKind::branch_seed: return {"m", "n", "s"};
    }
    return {};
}

FieldInit read_init(Reader& r, const std::string& prefix) {
    FieldInit f;
    if (const Entry* e = r.find(prefix + "kind")) f.kind = parse_init_kind(*e);
    const auto allowed = init_keys(f.kind);
    for (std::string_view key : {"amp", "kx", "ky", "px", "py", "x0", "y0", "width", "seed", "m", "n", "s"}) {
        if (r.has(prefix + std::string(key)) && std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(r.line_of(prefix + std::string(key)),
                              "'" + prefix + std::string(key) + "' is not used by " + std::string(to_string(f.kind)) +
                                  " initial data");
        }
    }
    if (const Entry* e = r.find(prefix + "base")) f.base = Reader::to_number(*e, prefix + "base");
    f.amp = r.number(prefix + "amp", f.amp);
    f.kx = r.number(prefix + "kx", f.kx);
    f.ky = r.number(prefix + "ky", f.ky);
    f.px = r.number(prefix + "px", f.px);
    f.py = r.number(prefix + "py", f.py);
    f.x0 = r.number(prefix + "x0", f.x0);
    f.y0 = r.number(prefix + "y0", f.y0);
    f.width = r.positive(prefix + "width", "init width", f.width);
    f.seed = r.unsigned_integer(prefix + "seed", f.seed);
    f.m = static_cast<int>(r.integer(prefix + "m", f.m));
    f.n = static_cast<int>(r.integer(prefix + "n", f.n));
    f.s = r.number(prefix + "s", f.s);
    if (f.kind == InitKind::noise && !r.has(prefix + "seed")) {
        throw ConfigError(r.line_of(prefix + "kind"), "noise initial data needs '" + prefix + "seed'");
    }
    return f;
}

void emit_init(std::ostringstream& out, const std::string& prefix, const FieldInit& f) {
    out << prefix << "kind = " << to_string(f.kind) << '\n';
    if (f.base) out << prefix << "base = " << format_double(*f.base) << '\n';
    switch (f.kind) {
        case InitKind::cosine:
            out << prefix << "amp = " << format_double(f.amp) << '\n'
                << prefix << "kx = " << format_double(f.kx) << '\n'
                << prefix << "ky = " << format_double(f.ky) << '\n'
                << prefix << "px = " << format_double(f.px) << '\n'
                << prefix << "py = " << format_double(f.py) << '\n';
            break;
        case InitKind::gaussian:
            out << prefix << "amp = " << format_double(f.amp) << '\n'
                << prefix << "x0 = " << format_double(f.x0) << '\n'
                << prefix << "y0 = " << format_double(f.y0) << '\n'
                << prefix << "width = " << format_double(f.width) << '\n';
            break;
        case InitKind::noise:
            out << prefix << "amp = " << format_double(f.amp) << '\n' << prefix << "seed = " << f.seed << '\n';
            break;
        case InitKind::branch_seed:
            out << prefix << "m = " << f.m << '\n'
                << prefix << "n = " << f.n << '\n'
                << prefix << "s = " << format_double(f.s) << '\n';
            break;
    }
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (entries.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        entries.emplace(key, Entry{value, line_no, false});
    }

    Reader r(std::move(entries));
    ScenarioConfig c;
    c.name = r.text("name", c.name);
    if (c.name.empty() || c.name.find_first_of("/\\ \t") != std::string::npos) {
        throw ConfigError(r.line_of("name"), "name must be a nonempty word without path separators");
    }

    const double d1 = r.positive("model.d1", "d1");
    const double d2 = r.positive("model.d2", "d2");
    const double chi = r.required_number("model.chi");
    const double mu = r.nonnegative("model.mu", "mu");
    const double ubar = r.positive("model.ubar", "ubar");
    const double alpha = r.positive("model.alpha", "alpha", 1.0);
    Sensitivity phi;
    if (const Entry* e = r.find("model.phi")) {
        try {
            phi = Sensitivity(parse_sensitivity_kind(e->value));
        } catch (const ParameterError& err) {
            throw ConfigError(e->line, err.what());
        }
    }
    Kinetics f = Kinetics::linear();
    if (const Entry* e = r.find("model.f")) {
        KineticsKind kind;
        try {
            kind = parse_kinetics_kind(e->value);
        } catch (const ParameterError& err) {
            throw ConfigError(e->line, err.what());
        }
        if (kind == KineticsKind::affine_linear) f = Kinetics::affine_linear(r.positive("model.beta", "beta", 1.0));
    }
    if (r.has("model.beta") && f.kind() != KineticsKind::affine_linear) {
        throw ConfigError(r.line_of("model.beta"), "model.beta requires model.f = affine_linear");
    }
    c.params = ModelParams(d1, d2, chi, mu, ubar, alpha, phi, f);

    const Entry& kind = r.require("domain.kind");
    if (kind.value == "interval") {
        c.domain = Domain::interval(r.positive("domain.lx", "domain.lx"));
    } else if (kind.value == "rectangle") {
        const double lx = r.positive("domain.lx", "domain.lx");
        c.domain = Domain::rectangle(lx, r.positive("domain.ly", "domain.ly"));
    } else {
        throw ConfigError(kind.line, "unknown domain kind '" + kind.value + "'");
    }

    const long default_n = std::max(128L, std::lround(32.0 * c.domain.lx));
    c.nx = static_cast<int>(r.integer("grid.nx", default_n));
    if (c.domain.kind == DomainKind::interval) {
        c.ny = static_cast<int>(r.integer("grid.ny", 1));
        if (c.ny != 1) throw ConfigError(r.line_of("grid.ny"), "interval grids have grid.ny = 1");
    } else {
        c.ny = static_cast<int>(r.integer("grid.ny", std::max(128L, std::lround(32.0 * c.domain.ly))));
    }
    if (c.nx < 8) throw ConfigError(r.line_of("grid.nx"), "grid.nx must be at least 8");
    if (c.domain.kind == DomainKind::rectangle && c.ny < 8) {
        throw ConfigError(r.line_of("grid.ny"), "grid.ny must be at least 8");
    }

    c.init_u = read_init(r, "init.u.");
    c.init_v = read_init(r, "init.v.");
    for (const FieldInit* fi : {&c.init_u, &c.init_v}) {
        if (fi->kind == InitKind::branch_seed) {
            try {
                make_mode(c.domain, fi->m, fi->n);
            } catch (const ParameterError& err) {
                const std::string prefix = fi == &c.init_u ? "init.u." : "init.v.";
                throw ConfigError(r.line_of(prefix + "m"), err.what());
            }
        }
    }

    c.run.dt_max = r.positive("run.dt_max", "run.dt_max", c.run.dt_max);
    c.run.t_max = r.positive("run.t_max", "run.t_max", c.run.t_max);
    c.run.tol_ss = r.positive("run.tol_ss", "run.tol_ss", c.run.tol_ss);
    if (r.has("run.blow_up_cap")) c.run.blow_up_cap = r.positive("run.blow_up_cap", "run.blow_up_cap");
    c.run.sample_every = static_cast<int>(r.integer("run.sample_every", c.run.sample_every));
    if (c.run.sample_every < 1) throw ConfigError(r.line_of("run.sample_every"), "run.sample_every must be positive");

    c.output.times = r.number_list("output.times");
    for (double t : c.output.times) {
        if (!(t >= 0.0)) throw ConfigError(r.line_of("output.times"), "output.times must be nonnegative");
    }
    c.output.write_u = r.boolean("output.u", c.output.write_u);
    c.output.write_v = r.boolean("output.v", c.output.write_v);
    c.output.csv = r.boolean("output.csv", c.output.csv);
    c.output.pgm = r.boolean("output.pgm", c.output.pgm);

    r.reject_unused();
    return c;
}

std::string emit_config(const ScenarioConfig& c) {
    std::ostringstream out;
    const ModelParams& p = c.params;
    out << "name = " << c.name << '\n'
        << "model.d1 = " << format_double(p.d1()) << '\n'
        << "model.d2 = " << format_double(p.d2()) << '\n'
        << "model.chi = " << format_double(p.chi()) << '\n'
        << "model.mu = " << format_double(p.mu()) << '\n'
        << "model.ubar = " << format_double(p.ubar()) << '\n'
        << "model.alpha = " << format_double(p.alpha()) << '\n'
        << "model.phi = " << to_string(p.phi().kind()) << '\n'
        << "model.f = " << to_string(p.f().kind()) << '\n';
    if (p.f().kind() == KineticsKind::affine_linear) out << "model.beta = " << format_double(p.f().beta()) << '\n';
    if (c.domain.kind == DomainKind::interval) {
        out << "domain.kind = interval\n"
            << "domain.lx = " << format_double(c.domain.lx) << '\n'
            << "grid.nx = " << c.nx << '\n';
    } else {
        out << "domain.kind = rectangle\n"
            << "domain.lx = " << format_double(c.domain.lx) << '\n'
            << "domain.ly = " << format_double(c.domain.ly) << '\n'
            << "grid.nx = " << c.nx << '\n'
            << "grid.ny = " << c.ny << '\n';
    }
    emit_init(out, "init.u.", c.init_u);
    emit_init(out, "init.v.", c.init_v);
    out << "run.dt_max = " << format_double(c.run.dt_max) << '\n'
        << "run.t_max = " << format_double(c.run.t_max) << '\n'
        << "run.tol_ss = " << format_double(c.run.tol_ss) << '\n';
    if (c.run.blow_up_cap) out << "run.blow_up_cap = " << format_double(*c.run.blow_up_cap) << '\n';
    out << "run.sample_every = " << c.run.sample_every << '\n';
    out << "output.times = ";
    for (std::size_t i = 0; i < c.output.times.size(); ++i) {
        out << (i ? "," : "") << format_double(c.output.times[i]);
    }
    out << '\n'
        << "output.u = " << (c.output.write_u ? "true" : "false") << '\n'
        << "output.v = " << (c.output.write_v ? "true" : "false") << '\n'
        << "output.csv = " << (c.output.csv ? "true" : "false") << '\n'
        << "output.pgm = " << (c.output.pgm ? "true" : "false") << '\n';
    return out.str();
}

namespace {

std::vector<double> init_field(const ScenarioConfig& c, const Grid& grid, const FieldInit& f, bool is_u) {
    const HomogeneousState hs = homogeneous_state(c.params);
    const double base = f.base.value_or(is_u ? hs.u : hs.v);
    std::vector<double> out(grid.size());
    switch (f.kind) {
        case InitKind::cosine:
            for (int j = 0; j < grid.ny(); ++j) {
                for (int i = 0; i < grid.nx(); ++i) {
                    const double x = grid.x(i), y = grid.y(j);
                    out[grid.index(i, j)] = base + f.amp * std::cos(f.kx * x + f.px) * std::cos(f.ky * y + f.py);
                }
            }
            break;
        case InitKind::gaussian:
            for (int j = 0; j < grid.ny(); ++j) {
                for (int i = 0; i < grid.nx(); ++i) {
                    const double dx = grid.x(i) - f.x0, dy = grid.y(j) - f.y0;
                    out[grid.index(i, j)] = base + f.amp * std::exp(-(dx * dx + dy * dy) / f.width);
                }
            }
            break;
        case InitKind::noise: {
            std::mt19937_64 rng(f.seed);
            for (double& x : out) {
                const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
                x = base + f.amp * (2.0 * unit - 1.0);
            }
            break;
        }
        case InitKind::branch_seed: {
            const Mode mode = make_mode(c.domain, f.m, f.n);
            const double weight = is_u ? f.s * q_ratio(c.params, mode) : f.s;
            const std::vector<double> phi = sample_mode(grid, mode);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = base + weight * phi[k];
            break;
        }
    }
    return out;
}

}  // namespace

FieldState initial_state(const ScenarioConfig& config) {
    const Grid grid = config.grid();
    FieldState s;
    s.u = init_field(config, grid, config.init_u, true);
    s.v = init_field(config, grid, config.init_v, false);
    return s;
}

}  // namespace kschemo::harness
