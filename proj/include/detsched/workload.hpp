#pragma once

// Synthetic blocks and block streams.

#include <cstdint>
#include <string>
#include <vector>

#include "detsched/model.hpp"

namespace detsched {

enum class LengthMode { Homogeneous, EpsilonHomogeneous, Heterogeneous };
enum class BlockShape {
    RandomKeys,  // read/write sets sampled from a key universe
    Chain,       // tx i accesses x_i and x_{i+1}
    Gnp,         // conflict graph drawn from G(n, p), one shared key per edge
};

struct SizeRange {
    std::size_t min = 0;
    std::size_t max = 0;
};

struct WorkloadSpec {
    std::size_t n_txs = 0;
    std::size_t key_universe = 16;
    SizeRange read_size{1, 2};
    SizeRange write_size{1, 2};
    LengthMode length_mode = LengthMode::Homogeneous;
    Length c = 1;
    Length epsilon = 0;
    std::vector<Length> choices{1, 10, 100, 1000};
    BlockShape shape = BlockShape::RandomKeys;
    double conflict_p = 0.1;
    std::uint64_t seed = 0;
};

// Throws ValidationError describing the first infeasible field.
void require_feasible(const WorkloadSpec& spec);

// Reproducible: equal specs give equal blocks.
Block gen_block(const WorkloadSpec& spec, std::uint64_t seq = 0, const std::string& prev_hash = "");

// Chain of n homogeneous transactions: tx i reads and writes x_i and x_{i+1}.
Block chain_block(std::size_t n, Length length = 1);

// Consecutive seq numbers from 0, each prev_hash the hash of the block before.
std::vector<Block> gen_stream(const std::vector<WorkloadSpec>& specs, const std::string& initial_prev_hash);

// True when all lengths lie within epsilon of each other.
bool is_epsilon_homogeneous(const Block& block, Length epsilon);

WorkloadSpec parse_workload_spec(const std::string& json_text);
std::vector<WorkloadSpec> parse_workload_specs(const std::string& json_text);
std::string serialize_workload_spec(const WorkloadSpec& spec);

}  // namespace detsched
