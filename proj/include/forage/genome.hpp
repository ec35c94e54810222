#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forage/rng.hpp"

namespace forage {

enum class Opcode : std::uint8_t {
    MoveStep,
    RotateStep,
    DockInStep,
    DockOutStep,
    ActuateStep,
    SenseStep,
    BranchOnSignal,
};

inline constexpr int kOpcodeCount = 7;

const char* to_string(Opcode op);

struct ArgRange {
    int lo;
    int hi;
};

ArgRange arg_range(Opcode op);

/// One instruction of a gene.
struct State {
    Opcode op = Opcode::MoveStep;
    int arg = 0;

    bool valid() const;
    bool operator==(const State&) const = default;
};

struct GeneWeights {
    double success = 1.0;
    double consumed_energy = 0.0;  // mAh estimate per use

    bool operator==(const GeneWeights&) const = default;
};

struct Gene {
    std::string name;
    std::vector<State> states;
    GeneWeights weights;
    bool recessive = false;

    bool operator==(const Gene&) const = default;
};

inline constexpr std::array<std::string_view, 5> kBasicGenes = {"move", "rotate", "dock in",
                                                                "dock from", "actuate"};

bool is_basic_gene(std::string_view name);

/// Genes that make a robot connect to others or actuate joints rather than
/// search on its own.
bool is_aggregation_gene(const Gene& gene);

struct GenomeParams {
    double success_increment = 1.0;
    double failure_factor = 0.5;
    // Zero-near threshold, relative to the best success among candidates.
    double zero_near_epsilon = 0.5;
    double energy_ema_alpha = 0.5;
    double tier_width_mah = 50.0;
    std::size_t max_states = std::size_t{1} << 16;
};

enum class Outcome { Success, Failure, Adopted };

const char* to_string(Outcome o);

struct UpdateRecord {
    std::string gene;
    Outcome outcome = Outcome::Success;
    double energy_spent = 0.0;
    double timestamp = 0.0;
    // Adopted records carry the gene received from a peer.
    std::optional<Gene> adopted;
};

class Genome {
public:
    std::string owner;
    std::vector<Gene> genes;
    std::vector<UpdateRecord> log;

    std::size_t total_states() const;

    /// The dominant (non-recessive) gene with this name.
    Gene* find(std::string_view name);
    const Gene* find(std::string_view name) const;

    std::size_t recessive_count() const;

    /// Throws ContractViolation naming the first broken invariant.
    void check_invariants(const GenomeParams& params = {}) const;

    /// Structural equality of the gene lists (logs are ignored).
    bool same_genes(const Genome& other) const { return genes == other.genes; }
};

/// The preprogrammed genome every robot starts with: the five basic genes and
/// a "climb" combination used for overstepping obstacles.
Genome default_genome(std::string owner);

/// Energy tier of a gene: consumed energy quantised into tier_width bands.
int energy_tier(const Gene& gene, const GenomeParams& params = {});

struct SelectionContext {
    bool allow_aggregation = true;
};

/// Cheapest tier first; within a tier the highest success wins, ties broken by
/// name. A tier is skipped when every candidate in it is zero-near, i.e. below
/// epsilon times the best success among all candidates.
const Gene& select_sequence(const Genome& genome, const SelectionContext& context = {},
                            const GenomeParams& params = {});

void update_on_success(Genome& genome, std::string_view sequence, double energy_spent,
                       double timestamp, const GenomeParams& params = {});
void update_on_failure(Genome& genome, std::string_view sequence, double timestamp,
                       const GenomeParams& params = {});

/// Rebuilds weights by applying `log` to a copy of `initial`.
Genome replay(const Genome& initial, std::span<const UpdateRecord> log,
              const GenomeParams& params = {});

/// Replaces, inserts or deletes one state in one non-basic gene.
Genome mutate(const Genome& genome, Rng& rng, const GenomeParams& params = {});

/// One-point crossover over the name-aligned gene lists.
Genome recombine(const Genome& first, const Genome& second, Rng& rng,
                 const GenomeParams& params = {});

/// Pairwise gene exchange between two robots that meet. Each side receives one
/// randomly chosen dominant non-basic gene of the other: added when absent,
/// overwriting when the donor's success is higher.
std::pair<Genome, Genome> exchange(const Genome& a, const Genome& b, Rng& rng,
                                   const GenomeParams& params = {}, double timestamp = 0.0);

/// Common genome of an organism. Basic genes averaged; for every other name the
/// highest-success variant is dominant and the rest are kept as recessive.
Genome merge_virtual_genome(std::span<const Genome> genomes, std::string owner,
                            const GenomeParams& params = {});

/// Mean pairwise distance over dominant genes: 1 for a gene missing on one
/// side or with different states, relative success difference otherwise.
double divergence(std::span<const Genome> genomes);

void write_genome(std::ostream& os, const Genome& genome);
Genome read_genome(std::istream& is);
void write_update_log_csv(std::ostream& os, const Genome& genome);

}  // namespace forage
