#include "kschemo/harness/catalog.hpp"

#include <numbers>
#include <string>

#include "kschemo/errors.hpp"

namespace kschemo::harness {

namespace {

constexpr double kPi = std::numbers::pi;

FieldInit cosine(double amp, double kx, double ky, double px = 0.0, double py = 0.0) {
    FieldInit f;
    f.kind = InitKind::cosine;
    f.amp = amp;
    f.kx = kx;
    f.ky = ky;
    f.px = px;
    f.py = py;
    return f;
}

FieldInit gaussian(double amp, double width) {
    FieldInit f;
    f.kind = InitKind::gaussian;
    f.amp = amp;
    f.width = width;
    return f;
}

ScenarioConfig square(const char* name, const ModelParams& p, double side) {
    ScenarioConfig c;
    c.name = name;
    c.params = p;
    c.domain = Domain::square(side);
    c.nx = c.ny = side <= 4.0 ? 128 : static_cast<int>(32.0 * side);
    return c;
}

std::vector<ScenarioConfig> build() {
    std::vector<ScenarioConfig> out;

    {
        ScenarioConfig c = square("fig2", ModelParams(5.0, 0.01, 5.0, 1.0, 3.0, 1.0), 1.0);
        c.init_u = cosine(1.0, 2.0 * kPi, kPi);
        c.init_v = cosine(1.0, kPi, kPi);
        out.push_back(c);
    }
    {
        ScenarioConfig c = square("fig3", ModelParams(0.0625, 1.0, 19.0, 8.0, 1.0, 1.0), 1.0);
        c.init_u = gaussian(1.0, 1.0);
        c.init_v = cosine(0.01, 1.0, 0.0);
        c.init_v.base = 2.0;
        c.output.times = {3.0, 18.0};
        out.push_back(c);
    }
    const struct {
        const char* name;
        double d2;
        double chi;
    } fig4[] = {{"fig4a", 0.1, 5.0}, {"fig4b", 0.1, 20.0}, {"fig4c", 0.005, 5.0}};
    for (const auto& f : fig4) {
        ScenarioConfig c = square(f.name, ModelParams(1.0, f.d2, f.chi, 10.0, 3.0, 1.0), 1.0);
        c.init_u = cosine(0.05, kPi, kPi);
        c.init_v = cosine(0.05, kPi, kPi);
        out.push_back(c);
    }
    const struct {
        const char* name;
        double side;
    } fig5[] = {{"fig5_L2", 2.0}, {"fig5_L4", 4.0}, {"fig5_L10", 10.0}, {"fig5_L15", 15.0}};
    for (const auto& f : fig5) {
        ScenarioConfig c = square(f.name, ModelParams(5.0, 0.1, 5.0, 1.0, 3.0, 1.0), f.side);
        c.init_u = cosine(1.0, 2.0, 2.0, 1.0, 1.0);
        c.init_v = cosine(1.0, 2.0, 2.0);
        out.push_back(c);
    }
    const struct {
        const char* name;
        double d1, d2, mu, ubar, side;
    } fig6[] = {{"fig6_i", 0.25, 0.25, 5.0, 3.0, 4.0},
                {"fig6_ii", 0.125, 0.5, 5.0, 3.0, 4.0},
                {"fig6_iii", 0.0625, 1.0, 6.0, 1.0, 4.0},
                {"fig6_iv", 0.0625, 1.0, 6.0, 1.0, 8.0}};
    for (const auto& f : fig6) {
        ScenarioConfig c = square(f.name, ModelParams(f.d1, f.d2, 10.0, f.mu, f.ubar, 1.0), f.side);
        c.init_u = gaussian(0.05, 2.0);
        c.init_v = gaussian(0.05, 2.0);
        out.push_back(c);
    }
    return out;
}

}  // namespace

const std::vector<ScenarioConfig>& scenario_catalog() {
    static const std::vector<ScenarioConfig> catalog = build();
    return catalog;
}

const ScenarioConfig& find_scenario(std::string_view name) {
    for (const ScenarioConfig& c : scenario_catalog()) {
        if (c.name == name) return c;
    }
    throw ConfigError(0, "unknown scenario '" + std::string(name) + "'");
}

}  // namespace kschemo::harness
