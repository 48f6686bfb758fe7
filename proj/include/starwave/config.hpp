#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starwave/dynamics.hpp"
#include "starwave/lattice.hpp"

namespace starwave {

enum class Command {
    dispersion,
    reflection,
    scatter,
    modes_roundtrip,
    continuum,
    verify,
};

std::string command_name(Command c);

struct KGridSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

struct RoundtripSpec {
    std::vector<int> n_rays_list;
    std::vector<int> ray_len_list;
    std::vector<int> grid_sizes;  // empty: use P = L + 2 and P = 4 L per length
    int num_states = 20;
};

struct ContinuumSpec {
    double k = 1.0;
    std::complex<double> k1{0.0, 1.0};
    std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4};
};

// A full run description: the model, one command, and the command's block.
// Parsing is strict; unknown keys and blocks that the command does not use
// are rejected with a field-path message.
struct RunConfig {
    LatticeParams model;
    Command command = Command::verify;
    std::uint64_t seed = 0x5eed0001u;
    std::string output;  // primary output file; command-specific default
    std::optional<KGridSpec> k_grid;
    std::optional<PacketSpec> packet;
    std::optional<RoundtripSpec> roundtrip;
    std::optional<ContinuumSpec> continuum;
};

RunConfig parse_config(const std::string& json_text);

}  // namespace starwave
