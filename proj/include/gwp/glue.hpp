#pragma once

/**
 * Relative theory tables and the degeneration-formula convolution.
 *
 * A table is relative to one divisor D with cohomology ring R. Its entries
 * are indexed by a slot (curve class beta, label tuple) and a boundary
 * weighted partition mu with |mu| = <D, beta>. Labels are opaque strings
 * standing for everything not glued along D (insertions, conditions along
 * other divisors); gluing concatenates them. An absolute table is a table
 * over the point ring with D = 0.
 *
 * Gluing X1/D and X2/D:
 *
 *   Z(X)_{beta, l1 l2} = sum_{beta1, beta2} sum_mu Z1_{beta1, l1, mu} w(mu) Z2_{beta2, l2, mu^v}
 *
 * with w(mu) = z(mu) u^{2 l(mu)} on the GW side and
 * w(mu) = (-1)^{|mu| - l(mu)} z(mu) q^{-|mu|} on the pairs side (pairs tables
 * are s-series with q = -s^2). mu^v is expanded with dual_partition.
 */

#include "gwp/bps.hpp"
#include "gwp/cohring.hpp"
#include "gwp/series.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gwp {

enum class Side { pairs, gw };
std::string to_string(Side side);
Side parse_side(const std::string& text);
/// s for pairs, u for gw.
Var side_var(Side side);

using Labels = std::vector<std::string>;

struct Slot {
    CurveClass beta;
    Labels labels;

    friend auto operator<=>(const Slot&, const Slot&) = default;
};

std::string slot_to_string(const Slot& slot);

class TheoryTable {
public:
    TheoryTable(Side side, GradedRing ring, std::vector<long> divisor_degree);
    /// Absolute table over the point ring for a class lattice of the given rank.
    static TheoryTable absolute(Side side, int rank);

    Side side() const noexcept { return side_; }
    const GradedRing& ring() const noexcept { return ring_; }
    const std::vector<long>& divisor_degree() const noexcept { return divisor_degree_; }
    int rank() const noexcept { return static_cast<int>(divisor_degree_.size()); }
    /// <D, beta>, the size of every boundary partition at beta.
    long boundary_size(const CurveClass& beta) const;

    /**
     * Checks the series variable (s with even exponents for pairs, u for gw),
     * the class rank and |mu| = <D, beta>.
     */
    void insert(const Slot& slot, const WeightedPartition& mu, HalfSeries value);
    /// PreconditionError("missing-entry") naming the key when absent.
    const HalfSeries& at(const Slot& slot, const WeightedPartition& mu) const;
    bool contains(const Slot& slot, const WeightedPartition& mu) const;

    const std::map<Slot, std::map<WeightedPartition, HalfSeries>>& entries() const noexcept { return entries_; }
    std::set<Slot> slots() const;

    friend bool operator==(const TheoryTable& a, const TheoryTable& b);

private:
    Side side_;
    GradedRing ring_;
    std::vector<long> divisor_degree_;
    std::map<Slot, std::map<WeightedPartition, HalfSeries>> entries_;
};

/// Entrywise agreement on every known coefficient, same slots and partitions.
bool agree(const TheoryTable& a, const TheoryTable& b);

bool same_ring(const GradedRing& a, const GradedRing& b);

/**
 * How the two classes combine: `additive` pairs beta1 + beta2 = beta with
 * <D1, beta1> = <D2, beta2>; `diagonal` pairs beta1 = beta2 = beta, which is
 * what gluing two capped edges of the same degree needs.
 */
enum class SplitRule { additive, diagonal };
std::string to_string(SplitRule rule);
SplitRule parse_split_rule(const std::string& text);

/// w(mu) for the side, as an exact monomial series.
HalfSeries gluing_weight(Side side, const WeightedPartition& mu);

/// Every output slot of the convolution.
TheoryTable glue(const TheoryTable& left, const TheoryTable& right, SplitRule rule = SplitRule::additive);
/// One output slot; exact zero when no splitting contributes.
HalfSeries glue_at(const TheoryTable& left, const TheoryTable& right, SplitRule rule, const Slot& slot);
/// glue_at restricted to GW tables.
HalfSeries glue_gw(const TheoryTable& left, const TheoryTable& right, SplitRule rule, const Slot& slot);
/// glue_at restricted to pairs tables.
HalfSeries glue_pairs(const TheoryTable& left, const TheoryTable& right, SplitRule rule, const Slot& slot);

/**
 * Closed form of the capped edge of degree d with boundary conditions nu
 * and mu in an orthonormal basis: delta (-1)^{|nu| - l(nu)} q^d / z(nu) for
 * pairs, delta u^{-2 l(nu)} / z(nu) for GW.
 */
HalfSeries capped_edge(Side side, long d, const WeightedPartition& nu, const WeightedPartition& mu);

/**
 * Capped edges of degree 0..max_degree as a rank-1 table relative to D = (1):
 * slot ((d), (nu)) holds the edge with far condition nu. For a general
 * pairing the entries are E = F D^{-T}, F the diagonal closed form and D the
 * matrix of dual_partition. This is a right unit for glue; when the ring has
 * no odd classes z(mu) d(mu -> lambda) is symmetric and it is a unit on both
 * sides. With an orthonormal basis this is the closed form.
 */
TheoryTable capped_edge_table(Side side, long max_degree, const GradedRing& ring);

enum class UnknownSide { left, right };
std::string to_string(UnknownSide side);
UnknownSide parse_unknown_side(const std::string& text);

struct InvertOptions {
    SplitRule rule = SplitRule::additive;
    /// Divisor degree of the unknown table; the known table's when unset.
    std::optional<std::vector<long>> divisor_degree;
    /// Expansion order for solutions that are not Laurent polynomials and for
    /// dividing by exact non-monomial pivots of truncated systems.
    long order = 24;
    unsigned jobs = 1;
};

struct ResidualEntry {
    Slot slot;
    HalfSeries value;
};

struct InvertResult {
    TheoryTable table;
    /// absolute - glue(known, solution) at every absolute slot where it is nonzero.
    std::vector<ResidualEntry> residual;
    bool zero_residual() const { return residual.empty(); }
};

/**
 * Solves absolute = glue(unknown, known) (or glue(known, unknown)) for the
 * unknown table. The unknown slots are read off from the absolute and known
 * slots; for each unknown label tuple the equations over all classes form
 * one exact linear system, solved by Gauss-Jordan elimination with unknowns
 * ordered by (class degree, codimension, partition). Exact Laurent-polynomial
 * input is solved over rational functions; truncated input over truncated
 * series with minimal-valuation pivots. Throws PreconditionError
 * ("singular-system") when an unknown is not determined. The residual is
 * recomputed by gluing the solution back.
 */
InvertResult invert_step(const TheoryTable& absolute, const TheoryTable& known, UnknownSide unknown,
                         const InvertOptions& options = {});

enum class PipelineOp { glue, invert };

struct PipelineNode {
    PipelineOp op = PipelineOp::glue;
    Side side = Side::gw;
    /// glue: {left, right}; invert: {absolute, known}.
    std::vector<std::string> inputs;
    std::string output;
    SplitRule rule = SplitRule::additive;
    UnknownSide unknown = UnknownSide::left;
    std::optional<std::vector<long>> divisor_degree;
    long order = 24;
};

struct PipelineStep {
    std::size_t node;  // index into the node list
    std::string output;
    PipelineOp op;
    std::size_t residual_entries = 0;  // invert only
};

struct PipelineResult {
    std::map<std::string, TheoryTable> tables;
    std::vector<PipelineStep> steps;  // execution order
};

/**
 * Runs the nodes in a topological order (ties broken by list position).
 * PreconditionError("missing-leaf") for an input that is neither a leaf nor
 * produced; PreconditionError("cycle") when no order exists.
 */
PipelineResult reduction_pipeline(const std::vector<PipelineNode>& nodes,
                                  const std::map<std::string, TheoryTable>& leaves, unsigned jobs = 1);

/**
 * The eight-step degree-reduction scheme for the quintic threefold,
 * T_{k+1} from T_k/S_k and P3[k,k+1]/S_k, and T_k/S_k by inverting
 * T_k = T_k/S_k glued to P_{S_k}/S_k, k = 1..4.
 */
std::vector<PipelineNode> quintic_scheme(Side side);

/**
 * Self-consistent random leaves for quintic_scheme: T1, P_{S_k}/S_k and
 * P3[k,k+1]/S_k over a two-class divisor ring. Every inversion in the scheme
 * is square and nonsingular with probability one. Structural data only.
 */
std::map<std::string, TheoryTable> synthetic_quintic_leaves(Side side, unsigned seed);

}  // namespace gwp
