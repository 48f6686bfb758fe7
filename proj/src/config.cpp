#include "starwave/config.hpp"

#include <numbers>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace starwave {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + ": " + what);
}

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path, "expected a JSON object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            fail(path.empty() ? item.key() : path + "." + item.key(),
                 "unknown key");
}

const json& require(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

LatticeParams parse_model(const json& j) {
    require_keys(j, "model", {"n_rays", "ray_len", "delta", "mass", "center_mass"});
    const int n_rays = as_int(require(j, "model", "n_rays"), "model.n_rays");
    const int ray_len = as_int(require(j, "model", "ray_len"), "model.ray_len");
    const double delta = as_number(require(j, "model", "delta"), "model.delta");
    const double mass = as_number(require(j, "model", "mass"), "model.mass");
    const double center_mass =
        as_number(require(j, "model", "center_mass"), "model.center_mass");
    try {
        return make_lattice(n_rays, ray_len, delta, mass, center_mass);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("model." + std::string(e.what()));
    }
}

KGridSpec parse_k_grid(const json& j, const LatticeParams& model, bool exclusive_top) {
    require_keys(j, "k_grid", {"min", "max", "count"});
    KGridSpec g;
    g.min = as_number(require(j, "k_grid", "min"), "k_grid.min");
    g.max = as_number(require(j, "k_grid", "max"), "k_grid.max");
    g.count = as_int(require(j, "k_grid", "count"), "k_grid.count");
    const double top = std::numbers::pi / model.delta;
    if (!(g.min > 0.0)) fail("k_grid.min", "must be > 0");
    if (!(g.max >= g.min)) fail("k_grid.max", "must be >= min");
    if (exclusive_top) {
        if (!(g.max < top)) fail("k_grid.max", "must be < pi/delta for this command");
    } else if (!(g.max <= top)) {
        fail("k_grid.max", "must be <= pi/delta");
    }
    if (g.count < 1) fail("k_grid.count", "must be >= 1");
    if (g.count == 1 && g.max != g.min) fail("k_grid.count", "count 1 needs min == max");
    return g;
}

PacketSpec parse_packet(const json& j, const LatticeParams& model) {
    require_keys(j, "packet", {"ray", "k0", "center", "width", "direction"});
    PacketSpec s;
    const int ray = as_int(require(j, "packet", "ray"), "packet.ray");
    if (ray < 1 || ray > model.n_rays)
        fail("packet.ray", "must be in 1.." + std::to_string(model.n_rays));
    s.ray = ray - 1;
    s.k0 = as_number(require(j, "packet", "k0"), "packet.k0");
    if (!(s.k0 > 0.0) || !(s.k0 < std::numbers::pi / model.delta))
        fail("packet.k0", "must lie in (0, pi/delta)");
    s.center = as_number(require(j, "packet", "center"), "packet.center");
    s.width = as_number(require(j, "packet", "width"), "packet.width");
    if (!(s.width >= 5.0)) fail("packet.width", "sigma must be >= 5");
    const json& dir = require(j, "packet", "direction");
    if (!dir.is_string()) fail("packet.direction", "expected a string");
    const std::string d = dir.get<std::string>();
    if (d == "toward-junction")
        s.direction = Direction::toward_junction;
    else if (d == "away-from-junction")
        s.direction = Direction::away_from_junction;
    else
        fail("packet.direction", "must be 'toward-junction' or 'away-from-junction'");
    return s;
}

RoundtripSpec parse_roundtrip(const json& j, const LatticeParams& model) {
    require_keys(j, "roundtrip",
                 {"n_rays_list", "ray_len_list", "grid_sizes", "num_states"});
    RoundtripSpec r;
    auto int_list = [&](const char* key, const std::string& path) {
        std::vector<int> out;
        if (const auto it = j.find(key); it != j.end()) {
            if (!it->is_array()) fail(path, "expected an array of integers");
            for (size_t i = 0; i < it->size(); ++i)
                out.push_back(as_int((*it)[i], path + "[" + std::to_string(i) + "]"));
        }
        return out;
    };
    r.n_rays_list = int_list("n_rays_list", "roundtrip.n_rays_list");
    r.ray_len_list = int_list("ray_len_list", "roundtrip.ray_len_list");
    r.grid_sizes = int_list("grid_sizes", "roundtrip.grid_sizes");
    if (r.n_rays_list.empty()) r.n_rays_list = {model.n_rays};
    if (r.ray_len_list.empty()) r.ray_len_list = {model.ray_len};
    for (const int n : r.n_rays_list)
        if (n < 3) fail("roundtrip.n_rays_list", "inverse transform needs N >= 3");
    for (const int l : r.ray_len_list)
        if (l < 2) fail("roundtrip.ray_len_list", "need L >= 2");
    for (const int p : r.grid_sizes)
        for (const int l : r.ray_len_list)
            if (p < l + 2)
                fail("roundtrip.grid_sizes",
                     "grid too coarse: P = " + std::to_string(p) +
                         " < L + 2 for L = " + std::to_string(l));
    if (const auto it = j.find("num_states"); it != j.end()) {
        r.num_states = as_int(*it, "roundtrip.num_states");
        if (r.num_states < 1) fail("roundtrip.num_states", "must be >= 1");
    }
    return r;
}

ContinuumSpec parse_continuum(const json& j) {
    require_keys(j, "continuum", {"k", "k1_re", "k1_im", "deltas"});
    ContinuumSpec c;
    if (const auto it = j.find("k"); it != j.end())
        c.k = as_number(*it, "continuum.k");
    if (!(c.k > 0.0)) fail("continuum.k", "must be > 0");
    double re = 0.0, im = 1.0;
    if (const auto it = j.find("k1_re"); it != j.end())
        re = as_number(*it, "continuum.k1_re");
    if (const auto it = j.find("k1_im"); it != j.end())
        im = as_number(*it, "continuum.k1_im");
    c.k1 = {re, im};
    if (std::abs(c.k1) == 0.0) fail("continuum.k1_re", "k1 must be nonzero");
    if (const auto it = j.find("deltas"); it != j.end()) {
        if (!it->is_array() || it->empty())
            fail("continuum.deltas", "expected a non-empty array");
        c.deltas.clear();
        for (size_t i = 0; i < it->size(); ++i) {
            const std::string path = "continuum.deltas[" + std::to_string(i) + "]";
            const double d = as_number((*it)[i], path);
            if (!(d > 0.0)) fail(path, "must be > 0");
            if (!c.deltas.empty() && !(d < c.deltas.back()))
                fail(path, "deltas must be strictly decreasing");
            c.deltas.push_back(d);
        }
    }
    return c;
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::dispersion: return "dispersion";
        case Command::reflection: return "reflection";
        case Command::scatter: return "scatter";
        case Command::modes_roundtrip: return "modes-roundtrip";
        case Command::continuum: return "continuum";
        case Command::verify: return "verify";
    }
    return "?";
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }

    RunConfig cfg;
    require_keys(j, "",
                 {"model", "command", "seed", "output", "k_grid", "packet",
                  "roundtrip", "continuum"});
    cfg.model = parse_model(require(j, "", "model"));

    const json& cmd = require(j, "", "command");
    if (!cmd.is_string()) fail("command", "expected a string");
    const std::string name = cmd.get<std::string>();
    if (name == "dispersion") cfg.command = Command::dispersion;
    else if (name == "reflection") cfg.command = Command::reflection;
    else if (name == "scatter") cfg.command = Command::scatter;
    else if (name == "modes-roundtrip") cfg.command = Command::modes_roundtrip;
    else if (name == "continuum") cfg.command = Command::continuum;
    else if (name == "verify") cfg.command = Command::verify;
    else fail("command", "unknown command '" + name + "'");

    if (const auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer() ||
            (!it->is_number_unsigned() && it->get<long long>() < 0))
            fail("seed", "expected a non-negative integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    if (const auto it = j.find("output"); it != j.end()) {
        if (!it->is_string()) fail("output", "expected a string");
        cfg.output = it->get<std::string>();
    }

    auto reject_block = [&](const char* key) {
        if (j.contains(key))
            fail(key, "not used by command '" + name + "'");
    };

    switch (cfg.command) {
        case Command::dispersion:
        case Command::reflection:
            cfg.k_grid = parse_k_grid(require(j, "", "k_grid"), cfg.model,
                                      cfg.command == Command::reflection);
            reject_block("packet");
            reject_block("roundtrip");
            reject_block("continuum");
            break;
        case Command::scatter:
            cfg.packet = parse_packet(require(j, "", "packet"), cfg.model);
            reject_block("k_grid");
            reject_block("roundtrip");
            reject_block("continuum");
            break;
        case Command::modes_roundtrip:
            if (cfg.model.center_mass != 1.0)
                fail("model.center_mass", "modes-roundtrip requires center_mass = 1");
            if (cfg.model.delta != 1.0)
                fail("model.delta", "modes-roundtrip requires delta = 1");
            cfg.roundtrip = j.contains("roundtrip")
                                ? parse_roundtrip(j["roundtrip"], cfg.model)
                                : parse_roundtrip(json::object(), cfg.model);
            reject_block("k_grid");
            reject_block("packet");
            reject_block("continuum");
            break;
        case Command::continuum:
            cfg.continuum = j.contains("continuum") ? parse_continuum(j["continuum"])
                                                    : ContinuumSpec{};
            reject_block("k_grid");
            reject_block("packet");
            reject_block("roundtrip");
            break;
        case Command::verify:
            reject_block("k_grid");
            reject_block("packet");
            reject_block("roundtrip");
            reject_block("continuum");
            break;
    }

    if (cfg.output.empty()) {
        if (cfg.command == Command::modes_roundtrip) cfg.output = "modes_roundtrip.txt";
        else if (cfg.command == Command::verify) cfg.output = "verify_report.txt";
        else cfg.output = name + ".csv";
    }
    return cfg;
}

}  // namespace starwave
