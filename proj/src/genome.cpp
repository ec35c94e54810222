#include "forage/genome.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "forage/errors.hpp"

namespace forage {

const char* to_string(Opcode op) {
    switch (op) {
        case Opcode::MoveStep: return "move";
        case Opcode::RotateStep: return "rotate";
        case Opcode::DockInStep: return "dock_in";
        case Opcode::DockOutStep: return "dock_out";
        case Opcode::ActuateStep: return "actuate";
        case Opcode::SenseStep: return "sense";
        case Opcode::BranchOnSignal: return "branch";
    }
    return "?";
}

ArgRange arg_range(Opcode op) {
    switch (op) {
        case Opcode::MoveStep: return {1, 100};      // cm
        case Opcode::RotateStep: return {-180, 180};  // degrees
        case Opcode::DockInStep: return {0, 3};       // connector location
        case Opcode::DockOutStep: return {0, 3};
        case Opcode::ActuateStep: return {0, 255};
        case Opcode::SenseStep: return {0, 7};
        case Opcode::BranchOnSignal: return {0, 15};
    }
    return {0, 0};
}

bool State::valid() const {
    if (static_cast<int>(op) >= kOpcodeCount) return false;
    const auto r = arg_range(op);
    return arg >= r.lo && arg <= r.hi;
}

bool is_basic_gene(std::string_view name) {
    return std::find(kBasicGenes.begin(), kBasicGenes.end(), name) != kBasicGenes.end();
}

bool is_aggregation_gene(const Gene& gene) {
    return std::any_of(gene.states.begin(), gene.states.end(), [](const State& s) {
        return s.op == Opcode::DockInStep || s.op == Opcode::DockOutStep ||
               s.op == Opcode::ActuateStep;
    });
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Success: return "success";
        case Outcome::Failure: return "failure";
        case Outcome::Adopted: return "adopted";
    }
    return "?";
}

std::size_t Genome::total_states() const {
    std::size_t n = 0;
    for (const auto& g : genes) n += g.states.size();
    return n;
}

Gene* Genome::find(std::string_view name) {
    for (auto& g : genes)
        if (!g.recessive && g.name == name) return &g;
    return nullptr;
}

const Gene* Genome::find(std::string_view name) const {
    for (const auto& g : genes)
        if (!g.recessive && g.name == name) return &g;
    return nullptr;
}

std::size_t Genome::recessive_count() const {
    return static_cast<std::size_t>(
        std::count_if(genes.begin(), genes.end(), [](const Gene& g) { return g.recessive; }));
}

void Genome::check_invariants(const GenomeParams& params) const {
    if (total_states() > params.max_states) throw ContractViolation("genome exceeds state cap");
    for (auto basic : kBasicGenes) {
        if (!find(basic)) throw ContractViolation("basic gene missing: " + std::string(basic));
    }
    std::map<std::string, int> dominant;
    for (const auto& g : genes) {
        if (g.states.empty()) throw ContractViolation("empty gene: " + g.name);
        for (const auto& s : g.states)
            if (!s.valid()) throw ContractViolation("invalid state in gene " + g.name);
        if (!(g.weights.success >= 0.0)) throw ContractViolation("negative success: " + g.name);
        if (!(g.weights.consumed_energy >= 0.0))
            throw ContractViolation("negative consumed energy: " + g.name);
        if (g.recessive && is_basic_gene(g.name))
            throw ContractViolation("basic gene marked recessive: " + g.name);
        if (!g.recessive && ++dominant[g.name] > 1)
            throw ContractViolation("two dominant genes named " + g.name);
    }
}

Genome default_genome(std::string owner) {
    using enum Opcode;
    Genome g;
    g.owner = std::move(owner);
    g.genes = {
        {"move", {{MoveStep, 10}, {MoveStep, 10}, {SenseStep, 0}}, {1.0, 10.0}, false},
        {"rotate", {{RotateStep, 45}, {SenseStep, 0}}, {1.0, 5.0}, false},
        {"dock in", {{SenseStep, 1}, {MoveStep, 2}, {DockInStep, 0}}, {1.0, 60.0}, false},
        {"dock from", {{DockOutStep, 0}, {MoveStep, 3}}, {1.0, 60.0}, false},
        {"actuate", {{ActuateStep, 128}}, {1.0, 110.0}, false},
        {"climb",
         {{DockOutStep, 3}, {DockInStep, 0}, {ActuateStep, 200}, {MoveStep, 5}},
         {1.0, 150.0},
         false},
    };
    return g;
}

int energy_tier(const Gene& gene, const GenomeParams& params) {
    return static_cast<int>(std::floor(gene.weights.consumed_energy / params.tier_width_mah));
}

const Gene& select_sequence(const Genome& genome, const SelectionContext& context,
                            const GenomeParams& params) {
    std::vector<const Gene*> candidates;
    for (const auto& g : genome.genes) {
        if (g.recessive) continue;
        if (!context.allow_aggregation && is_aggregation_gene(g)) continue;
        candidates.push_back(&g);
    }
    if (candidates.empty()) throw ContractViolation("genome has no selectable sequence");

    // Order by tier, then success descending, then name.
    std::sort(candidates.begin(), candidates.end(), [&](const Gene* a, const Gene* b) {
        const int ta = energy_tier(*a, params), tb = energy_tier(*b, params);
        if (ta != tb) return ta < tb;
        if (a->weights.success != b->weights.success)
            return a->weights.success > b->weights.success;
        return a->name < b->name;
    });

    double best = 0.0;
    for (const Gene* g : candidates) best = std::max(best, g->weights.success);
    if (best <= 0.0) return *candidates.front();

    const double zero_near = params.zero_near_epsilon * best;
    // Within a tier the first entry has the highest success; it is also the
    // one to return if the tier is not zero-near.
    for (const Gene* g : candidates) {
        if (g->weights.success >= zero_near) return *g;
    }
    return *candidates.front();
}

namespace {

Gene& require(Genome& genome, std::string_view sequence) {
    Gene* g = genome.find(sequence);
    if (!g) throw ContractViolation("unknown sequence: " + std::string(sequence));
    return *g;
}

void apply_success(Gene& g, double energy_spent, const GenomeParams& params) {
    g.weights.success += params.success_increment;
    g.weights.consumed_energy = params.energy_ema_alpha * energy_spent +
                                (1.0 - params.energy_ema_alpha) * g.weights.consumed_energy;
}

void apply_failure(Gene& g, const GenomeParams& params) {
    g.weights.success *= params.failure_factor;
}

/// Installs `donor` into `recipient`: added if absent, overwriting if the
/// donor's success is higher. Returns false when nothing changed.
bool adopt(Genome& recipient, const Gene& donor, double timestamp, const GenomeParams& params) {
    Gene incoming = donor;
    incoming.recessive = false;
    Gene* existing = recipient.find(donor.name);
    const std::size_t total = recipient.total_states();
    if (existing) {
        if (!(donor.weights.success > existing->weights.success)) return false;
        if (total - existing->states.size() + incoming.states.size() > params.max_states)
            return false;
        *existing = incoming;
    } else {
        if (total + incoming.states.size() > params.max_states) return false;
        recipient.genes.push_back(incoming);
    }
    recipient.log.push_back({donor.name, Outcome::Adopted, 0.0, timestamp, incoming});
    return true;
}

State random_state(Rng& rng) {
    State s;
    s.op = static_cast<Opcode>(rng.below(kOpcodeCount));
    const auto r = arg_range(s.op);
    s.arg = r.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(r.hi - r.lo + 1)));
    return s;
}

}  // namespace

void update_on_success(Genome& genome, std::string_view sequence, double energy_spent,
                       double timestamp, const GenomeParams& params) {
    if (energy_spent < 0.0) throw ContractViolation("negative energy spent");
    apply_success(require(genome, sequence), energy_spent, params);
    genome.log.push_back({std::string(sequence), Outcome::Success, energy_spent, timestamp, {}});
}

void update_on_failure(Genome& genome, std::string_view sequence, double timestamp,
                       const GenomeParams& params) {
    apply_failure(require(genome, sequence), params);
    genome.log.push_back({std::string(sequence), Outcome::Failure, 0.0, timestamp, {}});
}

Genome replay(const Genome& initial, std::span<const UpdateRecord> log,
              const GenomeParams& params) {
    Genome g = initial;
    g.log.clear();
    for (const auto& rec : log) {
        switch (rec.outcome) {
            case Outcome::Success:
                update_on_success(g, rec.gene, rec.energy_spent, rec.timestamp, params);
                break;
            case Outcome::Failure: update_on_failure(g, rec.gene, rec.timestamp, params); break;
            case Outcome::Adopted:
                if (!rec.adopted) throw ContractViolation("adopted record without gene");
                if (!adopt(g, *rec.adopted, rec.timestamp, params))
                    throw ContractViolation("log replay diverged at adoption of " + rec.gene);
                break;
        }
    }
    return g;
}

Genome mutate(const Genome& genome, Rng& rng, const GenomeParams& params) {
    Genome out = genome;
    std::vector<std::size_t> mutable_genes;
    for (std::size_t i = 0; i < out.genes.size(); ++i)
        if (!is_basic_gene(out.genes[i].name)) mutable_genes.push_back(i);
    if (mutable_genes.empty()) return out;

    Gene& gene = out.genes[mutable_genes[rng.below(mutable_genes.size())]];
    const bool at_cap = out.total_states() >= params.max_states;
    for (;;) {
        const auto kind = rng.below(3);
        if (kind == 0) {
            gene.states[rng.below(gene.states.size())] = random_state(rng);
            break;
        }
        if (kind == 1) {
            if (at_cap) continue;  // would break the cap; draw again
            const auto pos = rng.below(gene.states.size() + 1);
            gene.states.insert(gene.states.begin() + static_cast<std::ptrdiff_t>(pos),
                               random_state(rng));
            break;
        }
        if (gene.states.size() < 2) continue;  // genes stay non-empty
        gene.states.erase(gene.states.begin() +
                          static_cast<std::ptrdiff_t>(rng.below(gene.states.size())));
        break;
    }
    return out;
}

namespace {

struct GeneKey {
    std::string name;
    bool recessive;
    int occurrence;
    auto operator<=>(const GeneKey&) const = default;
};

std::vector<std::pair<GeneKey, const Gene*>> keyed(const Genome& g) {
    std::map<std::pair<std::string, bool>, int> seen;
    std::vector<std::pair<GeneKey, const Gene*>> out;
    for (const auto& gene : g.genes) {
        const int k = seen[{gene.name, gene.recessive}]++;
        out.push_back({{gene.name, gene.recessive, k}, &gene});
    }
    return out;
}

}  // namespace

Genome recombine(const Genome& first, const Genome& second, Rng& rng,
                 const GenomeParams& params) {
    const auto a = keyed(first);
    const auto b = keyed(second);
    std::map<GeneKey, const Gene*> from_a(a.begin(), a.end());
    std::map<GeneKey, const Gene*> from_b(b.begin(), b.end());

    std::vector<GeneKey> order;
    for (const auto& [k, _] : a) order.push_back(k);
    for (const auto& [k, _] : b)
        if (!from_a.count(k)) order.push_back(k);

    for (int attempt = 0; attempt < 16; ++attempt) {
        const auto cut = rng.below(order.size() + 1);
        Genome child;
        child.owner = first.owner;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto& src = i < cut ? from_a : from_b;
            auto it = src.find(order[i]);
            if (it != src.end()) {
                child.genes.push_back(*it->second);
            } else if (is_basic_gene(order[i].name) && !order[i].recessive) {
                const auto& other = i < cut ? from_b : from_a;
                child.genes.push_back(*other.at(order[i]));
            }
        }
        if (child.total_states() <= params.max_states) return child;
    }
    Genome fallback = first;
    fallback.log.clear();
    return fallback;
}

std::pair<Genome, Genome> exchange(const Genome& a, const Genome& b, Rng& rng,
                                   const GenomeParams& params, double timestamp) {
    auto pick_donor = [&rng](const Genome& donor) -> const Gene* {
        std::vector<const Gene*> pool;
        for (const auto& g : donor.genes)
            if (!g.recessive && !is_basic_gene(g.name)) pool.push_back(&g);
        if (pool.empty()) return nullptr;
        return pool[rng.below(pool.size())];
    };
    Genome a2 = a, b2 = b;
    const Gene* to_a = pick_donor(b);
    const Gene* to_b = pick_donor(a);
    if (to_a) adopt(a2, *to_a, timestamp, params);
    if (to_b) adopt(b2, *to_b, timestamp, params);
    return {std::move(a2), std::move(b2)};
}

Genome merge_virtual_genome(std::span<const Genome> genomes, std::string owner,
                            const GenomeParams& params) {
    if (genomes.size() < 2) throw ContractViolation("merge needs at least two genomes");
    Genome out;
    out.owner = std::move(owner);

    const double n = static_cast<double>(genomes.size());
    for (auto basic : kBasicGenes) {
        const Gene* first = genomes[0].find(basic);
        if (!first) throw ContractViolation("basic gene missing: " + std::string(basic));
        Gene merged = *first;
        // Mean written as an offset from the first value so identical inputs
        // reproduce it exactly.
        double ds = 0.0, de = 0.0;
        for (const auto& g : genomes) {
            const Gene* other = g.find(basic);
            if (!other) throw ContractViolation("basic gene missing: " + std::string(basic));
            ds += other->weights.success - first->weights.success;
            de += other->weights.consumed_energy - first->weights.consumed_energy;
        }
        merged.weights.success = first->weights.success + ds / n;
        merged.weights.consumed_energy = first->weights.consumed_energy + de / n;
        out.genes.push_back(std::move(merged));
    }

    std::vector<std::string> names;
    std::map<std::string, std::vector<const Gene*>> variants;
    for (const auto& g : genomes) {
        for (const auto& gene : g.genes) {
            if (is_basic_gene(gene.name)) continue;
            if (!variants.count(gene.name)) names.push_back(gene.name);
            variants[gene.name].push_back(&gene);
        }
    }
    auto same_variant = [](const Gene& x, const Gene& y) {
        return x.states == y.states && x.weights == y.weights;
    };
    for (const auto& name : names) {
        const auto& vs = variants[name];
        const Gene* dominant = nullptr;
        for (const Gene* v : vs)
            if (!v->recessive && (!dominant || v->weights.success > dominant->weights.success))
                dominant = v;
        std::vector<const Gene*> kept;
        if (dominant) {
            Gene d = *dominant;
            d.recessive = false;
            out.genes.push_back(std::move(d));
            kept.push_back(dominant);
        }
        for (const Gene* v : vs) {
            if (v == dominant) continue;
            bool duplicate = false;
            for (const Gene* k : kept) duplicate = duplicate || same_variant(*k, *v);
            if (duplicate) continue;
            Gene r = *v;
            r.recessive = true;
            out.genes.push_back(std::move(r));
            kept.push_back(v);
        }
    }

    // Evict lowest-success recessive genes first, then non-basic dominants.
    auto evict_one = [&](bool recessive) {
        std::ptrdiff_t victim = -1;
        for (std::size_t i = 0; i < out.genes.size(); ++i) {
            const Gene& g = out.genes[i];
            if (g.recessive != recessive || is_basic_gene(g.name)) continue;
            if (victim < 0 || g.weights.success <= out.genes[victim].weights.success)
                victim = static_cast<std::ptrdiff_t>(i);
        }
        if (victim < 0) return false;
        out.genes.erase(out.genes.begin() + victim);
        return true;
    };
    while (out.total_states() > params.max_states) {
        if (!evict_one(true) && !evict_one(false)) break;
    }
    return out;
}

double divergence(std::span<const Genome> genomes) {
    if (genomes.size() < 2) return 0.0;
    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        for (std::size_t j = i + 1; j < genomes.size(); ++j) {
            std::map<std::string, std::pair<const Gene*, const Gene*>> names;
            for (const auto& g : genomes[i].genes)
                if (!g.recessive) names[g.name].first = &g;
            for (const auto& g : genomes[j].genes)
                if (!g.recessive) names[g.name].second = &g;
            double d = 0.0;
            for (const auto& [_, p] : names) {
                if (!p.first || !p.second || p.first->states != p.second->states) {
                    d += 1.0;
                    continue;
                }
                const double s1 = p.first->weights.success, s2 = p.second->weights.success;
                if (s1 + s2 > 0.0) d += std::abs(s1 - s2) / (s1 + s2);
            }
            total += names.empty() ? 0.0 : d / static_cast<double>(names.size());
            ++pairs;
        }
    }
    return total / pairs;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("bad number in genome record: " + s);
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

// Text record, one gene per line, tab separated:
//   forage-genome<TAB>1
//   owner<TAB><owner>
//   gene<TAB><name><TAB><0|1 recessive><TAB><success><TAB><energy><TAB><op:arg op:arg ...>
//   end
void write_genome(std::ostream& os, const Genome& genome) {
    os << "forage-genome\t1\n";
    os << "owner\t" << genome.owner << '\n';
    for (const auto& g : genome.genes) {
        os << "gene\t" << g.name << '\t' << (g.recessive ? 1 : 0) << '\t'
           << format_double(g.weights.success) << '\t' << format_double(g.weights.consumed_energy)
           << '\t';
        for (std::size_t i = 0; i < g.states.size(); ++i) {
            if (i) os << ' ';
            os << static_cast<int>(g.states[i].op) << ':' << g.states[i].arg;
        }
        os << '\n';
    }
    os << "end\n";
}

Genome read_genome(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "forage-genome\t1")
        throw ConfigError("not a version 1 genome record");
    Genome g;
    bool ended = false;
    while (std::getline(is, line)) {
        if (line == "end") {
            ended = true;
            break;
        }
        const auto fields = split(line, '\t');
        if (fields[0] == "owner" && fields.size() == 2) {
            g.owner = fields[1];
        } else if (fields[0] == "gene" && fields.size() == 6) {
            Gene gene;
            gene.name = fields[1];
            if (fields[2] != "0" && fields[2] != "1") throw ConfigError("bad recessive flag");
            gene.recessive = fields[2] == "1";
            gene.weights.success = parse_double(fields[3]);
            gene.weights.consumed_energy = parse_double(fields[4]);
            for (const auto& tok : split(fields[5], ' ')) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos) throw ConfigError("bad state token: " + tok);
                State s;
                const int op = std::stoi(tok.substr(0, colon));
                if (op < 0 || op >= kOpcodeCount) throw ConfigError("bad opcode: " + tok);
                s.op = static_cast<Opcode>(op);
                s.arg = std::stoi(tok.substr(colon + 1));
                if (!s.valid()) throw ConfigError("state argument out of range: " + tok);
                gene.states.push_back(s);
            }
            g.genes.push_back(std::move(gene));
        } else {
            throw ConfigError("unrecognised genome line: " + line);
        }
    }
    if (!ended) throw ConfigError("genome record not terminated");
    return g;
}

void write_update_log_csv(std::ostream& os, const Genome& genome) {
    os << "gene,outcome,energy_spent,timestamp\n";
    for (const auto& r : genome.log)
        os << '"' << r.gene << "\"," << to_string(r.outcome) << ',' << format_double(r.energy_spent)
           << ',' << format_double(r.timestamp) << '\n';
}

}  // namespace forage
