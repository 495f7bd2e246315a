#include "bvctrl/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace bvctrl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

ModelSystem model_from_spec(const std::string& model, const json& params, int N) {
    if (model == "rotor") return build_rotor(N);
    if (model == "anharmonic")
        return build_anharmonic(params.at("alpha").get<int>(), params.at("beta").get<int>(), N);
    if (model == "trap") return build_trap(params.at("lambda").get<double>(), N);
    fail("system spec: unknown model '" + model + "'");
}

SystemBundle custom_from_spec(const json& params, int N, double delta) {
    std::vector<double> eigenvalues = params.at("eigenvalues").get<std::vector<double>>();
    double shift = params.value("lower_bound_shift", 0.0);
    SpectralDrift drift = SpectralDrift::from_values(std::move(eigenvalues), shift);

    std::vector<CouplingTriplet> triplets;
    for (const auto& row : params.at("coupling")) {
        if (!row.is_array() || row.size() != 4)
            fail("system spec: coupling entries must be [j, k, re, im]");
        triplets.push_back({row[0].get<int>(), row[1].get<int>(),
                            Complex(row[2].get<double>(), row[3].get<double>())});
    }
    GalerkinSystem system = compress(drift, CouplingOperator::from_triplets(triplets), N);
    if (params.contains("constants")) {
        const auto& c = params["constants"];
        BoundConstants constants;
        constants.a = c.value("a", 0.0);
        constants.b = c.value("b", 0.0);
        constants.d = c.value("d", 0.0);
        constants.alpha = c.value("alpha", 1.0);
        constants.estimated = c.value("estimated", true);
        system = system.with_constants(constants, delta);
    }
    return {std::move(system), "custom", {}};
}

} // namespace

SystemBundle system_from_json(const json& spec) {
    return system_from_json(spec, spec.at("N").get<int>());
}

SystemBundle system_from_json(const json& spec, int order) {
    const std::string model = spec.at("model").get<std::string>();
    const json params = spec.value("params", json::object());
    const double delta = spec.value("delta", 0.1);
    if (model == "custom") return custom_from_spec(params, order, delta);
    ModelSystem m = model_from_spec(model, params, order);
    SystemBundle bundle{make_system(m, order, delta), model, m.metadata};
    return bundle;
}

ControlSpec control_from_json(const json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "pc") {
        return PiecewiseConstantControl::make(spec.at("breakpoints").get<std::vector<double>>(),
                                              spec.at("values").get<std::vector<double>>());
    }
    if (kind == "sampled") {
        std::optional<double> tv;
        if (spec.contains("declared_tv")) tv = spec["declared_tv"].get<double>();
        return SampledBVControl::make(spec.at("grid").get<std::vector<double>>(),
                                      spec.at("samples").get<std::vector<double>>(), tv);
    }
    if (kind == "analytic") {
        const std::string form = spec.at("form").get<std::string>();
        if (form != "cosine") fail("control spec: unknown analytic form '" + form + "'");
        return cosine_control(spec.at("amplitude").get<double>(),
                              spec.at("frequency").get<double>(),
                              spec.at("duration").get<double>(),
                              spec.at("resolution").get<int>());
    }
    fail("control spec: unknown kind '" + kind + "'");
}

double control_duration(const ControlSpec& control) {
    return std::visit([](const auto& u) { return u.duration(); }, control);
}

double control_sup_abs(const ControlSpec& control) {
    return std::visit([](const auto& u) { return u.sup_abs(); }, control);
}

SampledBVControl cosine_control(double amplitude, double frequency, double duration,
                                int resolution) {
    if (!(frequency > 0.0)) fail("cosine_control: frequency must be > 0");
    if (!(duration > 0.0)) fail("cosine_control: duration must be > 0");
    if (resolution < 1) fail("cosine_control: resolution must be >= 1");
    std::vector<double> grid(static_cast<size_t>(resolution) + 1);
    std::vector<double> samples(grid.size());
    for (int i = 0; i <= resolution; ++i) {
        const double t = duration * i / resolution;
        grid[static_cast<size_t>(i)] = t;
        samples[static_cast<size_t>(i)] = amplitude * std::cos(frequency * t);
    }
    grid.back() = duration;
    // exact TV of a cosine arc: 2|amp| per completed half-period plus the
    // partial swing at the end
    const double half_periods = std::floor(duration * frequency / std::numbers::pi);
    const auto m = static_cast<long long>(half_periods);
    const double last_extremum = (m % 2 == 0) ? 1.0 : -1.0;
    const double tv = std::abs(amplitude) *
                      (2.0 * half_periods + std::abs(std::cos(frequency * duration) - last_extremum));
    return SampledBVControl::make(std::move(grid), std::move(samples), tv);
}

StateVector initial_state_from_json(const json& spec, int N) {
    if (spec.contains("basis_index")) {
        const int k = spec["basis_index"].get<int>();
        if (k < 1 || k > N) fail("initial state: basis index outside 1..N");
        StateVector psi = StateVector::Zero(N);
        psi[k - 1] = Complex(1.0, 0.0);
        return psi;
    }
    if (spec.contains("coefficients")) {
        const auto& coeffs = spec["coefficients"];
        if (static_cast<int>(coeffs.size()) != N)
            fail("initial state: coefficient list length must equal N");
        StateVector psi(N);
        for (int j = 0; j < N; ++j) {
            const auto& c = coeffs[static_cast<size_t>(j)];
            if (!c.is_array() || c.size() != 2) fail("initial state: coefficients are [re, im] pairs");
            psi[j] = Complex(c[0].get<double>(), c[1].get<double>());
        }
        return psi;
    }
    fail("initial state: expected 'basis_index' or 'coefficients'");
}

json report_to_json(const BoundReport& report) {
    json j;
    j["name"] = report.name;
    j["measured"] = report.measured;
    j["bound"] = report.bound;
    j["satisfied"] = report.satisfied;
    j["estimated_constants"] = report.estimated_constants;
    j["inputs"] = json::object();
    for (const auto& [key, value] : report.inputs) j["inputs"][key] = value;
    return j;
}

void write_reports_csv(std::ostream& os, std::span<const BoundReport> reports) {
    os << "name,measured,bound,satisfied,estimated_constants\n";
    for (const auto& r : reports)
        os << r.name << ',' << format_g17(r.measured) << ',' << format_g17(r.bound) << ','
           << (r.satisfied ? 1 : 0) << ',' << (r.estimated_constants ? 1 : 0) << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
    const auto n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
    os << "t";
    for (Eigen::Index j = 1; j <= n; ++j) os << ",re_c" << j << ",im_c" << j;
    os << ",norm,h1_norm\n";
    for (size_t i = 0; i < trajectory.times.size(); ++i) {
        os << format_g17(trajectory.times[i]);
        for (Eigen::Index j = 0; j < n; ++j)
            os << ',' << format_g17(trajectory.states[i][j].real()) << ','
               << format_g17(trajectory.states[i][j].imag());
        os << ',' << format_g17(trajectory.diagnostics[i].norm) << ','
           << format_g17(trajectory.diagnostics[i].homogeneous_r) << '\n';
    }
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::uint64_t fnv1a_hash(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace bvctrl
