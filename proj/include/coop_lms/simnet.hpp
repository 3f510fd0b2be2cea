#pragma once

#include "coop_lms/chebyshev.hpp"
#include "coop_lms/graph.hpp"
#include "coop_lms/lms.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace coop_lms::simnet {

using graph::NodeId;
using linalg::Matrix;
using linalg::Vector;

struct VectorMessage {
    NodeId from;
    NodeId to;
    Vector payload;
    std::size_t round;
};

struct CommStats {
    std::size_t messages_sent = 0;
    std::size_t scalars_sent = 0;
    std::size_t rounds = 0;

    friend bool operator==(const CommStats&, const CommStats&) = default;
};

/// One delivered message as seen by its reader.
struct AccessRecord {
    NodeId reader;
    NodeId source;
    std::size_t round;
};

/// Per-node mailboxes with round-barrier bookkeeping. Every rule breach
/// (non-edge, wrong round, duplicate, missing message, undrained mailbox at
/// the barrier) throws ProtocolError.
class Transport {
public:
    explicit Transport(const graph::Graph& g, std::size_t payload_len);

    void begin_round(std::size_t round);
    void post(VectorMessage msg);
    /// Barrier between the send and receive phases.
    void close_sends();
    /// All messages addressed to `node` this round, sorted by sender. Each
    /// mailbox may be drained exactly once per round and must hold exactly one
    /// message per neighbor.
    std::vector<VectorMessage> drain(NodeId node);
    void end_round();

    const CommStats& stats() const noexcept { return stats_; }
    void enable_audit(std::vector<AccessRecord>* sink) noexcept { audit_ = sink; }

private:
    const graph::Graph& graph_;
    std::size_t payload_len_;
    std::vector<std::vector<VectorMessage>> mailboxes_;
    std::vector<char> drained_;
    std::size_t round_ = 0;
    bool in_round_ = false;
    bool sends_closed_ = false;
    CommStats stats_;
    std::vector<AccessRecord>* audit_ = nullptr;
};

/// Agent-private view of the protocol: its own H_k, y_k, x_k, neighbor ids,
/// the shared step sizes and (optionally) the shared relaxation schedule.
class AgentNode {
public:
    AgentNode(NodeId id, Matrix h, Vector y, std::vector<NodeId> neighbors, lms::StepSizes steps,
              const chebyshev::ChebyshevSchedule* schedule);

    NodeId id() const noexcept { return id_; }
    const Vector& state() const noexcept { return x_; }

    /// Local gradient step, then u_k is posted to every neighbor.
    void send_phase(std::size_t round, Transport& net);
    /// Neighbor combination, then local relaxation with omega for `round`.
    void receive_phase(std::size_t round, Transport& net);

private:
    NodeId id_;
    Matrix h_;
    Vector y_;
    std::vector<NodeId> neighbors_;
    lms::StepSizes steps_;
    const chebyshev::ChebyshevSchedule* schedule_;
    Vector x_;
    Vector u_;
};

struct Variant {
    std::optional<chebyshev::ChebyshevSchedule> schedule;  // empty: plain

    static Variant plain() { return {}; }
    static Variant chebyshev(chebyshev::ChebyshevSchedule s) { return {std::move(s)}; }
    bool is_plain() const noexcept { return !schedule.has_value(); }
};

struct RunOptions {
    /// When set, agents within each phase are processed in an order shuffled
    /// from this seed. Results must not depend on it.
    std::optional<std::uint64_t> schedule_seed;
    std::vector<AccessRecord>* audit = nullptr;
};

struct DistributedResult {
    std::vector<Vector> final_states;
    CommStats stats;
    lms::Trajectory trajectory;
};

DistributedResult run_distributed(const lms::Scenario& s, std::size_t iterations, const Variant& variant,
                                  const RunOptions& options = {});

/// Runs rounds until the ASE against the centralized solution drops to
/// `target` or `max_rounds` pass. Empty when the target is not reached.
std::optional<CommStats> messages_to_target_ase(const lms::Scenario& s, double target,
                                                const Variant& variant, std::size_t max_rounds);

}  // namespace coop_lms::simnet
