#include "coop_lms/simnet.hpp"

#include "coop_lms/errors.hpp"
#include "coop_lms/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace coop_lms::simnet {

namespace {

std::string edge_text(NodeId u, NodeId v) {
    return "(" + std::to_string(u) + "->" + std::to_string(v) + ")";
}

}  // namespace

Transport::Transport(const graph::Graph& g, std::size_t payload_len)
    : graph_(g), payload_len_(payload_len), mailboxes_(g.node_count()), drained_(g.node_count(), 0) {}

void Transport::begin_round(std::size_t round) {
    if (in_round_) throw ProtocolError("transport: round " + std::to_string(round_) + " still open");
    if (round != stats_.rounds) {
        throw ProtocolError("transport: expected round " + std::to_string(stats_.rounds) + ", got " +
                            std::to_string(round));
    }
    round_ = round;
    in_round_ = true;
    sends_closed_ = false;
    std::fill(drained_.begin(), drained_.end(), 0);
}

void Transport::post(VectorMessage msg) {
    if (!in_round_ || sends_closed_) {
        throw ProtocolError("transport: message " + edge_text(msg.from, msg.to) + " posted outside the send phase");
    }
    if (msg.round != round_) {
        throw ProtocolError("transport: late message " + edge_text(msg.from, msg.to) + " from round " +
                            std::to_string(msg.round));
    }
    if (!graph_.has_edge(msg.from, msg.to)) {
        throw ProtocolError("transport: " + edge_text(msg.from, msg.to) + " is not an edge");
    }
    if (static_cast<std::size_t>(msg.payload.size()) != payload_len_) {
        throw ProtocolError("transport: payload length mismatch on " + edge_text(msg.from, msg.to));
    }
    auto& box = mailboxes_[msg.to];
    const bool dup = std::any_of(box.begin(), box.end(), [&](const VectorMessage& m) { return m.from == msg.from; });
    if (dup) throw ProtocolError("transport: duplicate message " + edge_text(msg.from, msg.to));

    ++stats_.messages_sent;
    stats_.scalars_sent += payload_len_;
    box.push_back(std::move(msg));
}

void Transport::close_sends() {
    if (!in_round_ || sends_closed_) throw ProtocolError("transport: barrier reached twice");
    sends_closed_ = true;
}

std::vector<VectorMessage> Transport::drain(NodeId node) {
    if (!sends_closed_) throw ProtocolError("transport: mailbox drained before the barrier");
    if (drained_.at(node)) throw ProtocolError("transport: mailbox " + std::to_string(node) + " drained twice");
    drained_[node] = 1;

    std::vector<VectorMessage> out = std::move(mailboxes_[node]);
    mailboxes_[node].clear();
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.from < b.from; });

    const auto& expected = graph_.neighbors(node);
    const bool complete = out.size() == expected.size() &&
                          std::equal(out.begin(), out.end(), expected.begin(),
                                     [](const VectorMessage& m, NodeId j) { return m.from == j; });
    if (!complete) {
        throw ProtocolError("transport: node " + std::to_string(node) + " did not receive exactly one message per neighbor");
    }
    if (audit_ != nullptr) {
        for (const auto& m : out) audit_->push_back({node, m.from, round_});
    }
    return out;
}

void Transport::end_round() {
    if (!sends_closed_) throw ProtocolError("transport: round ended before the barrier");
    for (std::size_t k = 0; k < mailboxes_.size(); ++k) {
        if (!drained_[k]) throw ProtocolError("transport: mailbox " + std::to_string(k) + " left undrained");
    }
    in_round_ = false;
    ++stats_.rounds;
}

AgentNode::AgentNode(NodeId id, Matrix h, Vector y, std::vector<NodeId> neighbors, lms::StepSizes steps,
                     const chebyshev::ChebyshevSchedule* schedule)
    : id_(id),
      h_(std::move(h)),
      y_(std::move(y)),
      neighbors_(std::move(neighbors)),
      steps_(steps),
      schedule_(schedule),
      x_(Vector::Zero(h_.cols())),
      u_(Vector::Zero(h_.cols())) {}

void AgentNode::send_phase(std::size_t round, Transport& net) {
    u_ = x_ + steps_.mu * h_.transpose() * (y_ - h_ * x_);
    for (NodeId j : neighbors_) net.post({id_, j, u_, round});
}

void AgentNode::receive_phase(std::size_t round, Transport& net) {
    Vector acc = Vector::Zero(u_.size());
    for (const auto& m : net.drain(id_)) acc += m.payload - u_;
    Vector v = u_ + steps_.eta * acc;
    if (schedule_ != nullptr) {
        const double omega = schedule_->factor_at(round);
        x_ = (1.0 - omega) * x_ + omega * v;
    } else {
        x_ = std::move(v);
    }
}

namespace {

class Network {
public:
    Network(const lms::Scenario& s, const Variant& variant, const RunOptions& options)
        : scenario_(s), variant_(variant), net_(s.graph(), s.dim()), order_(s.agents()) {
        const auto* sched = variant_.schedule ? &*variant_.schedule : nullptr;
        agents_.reserve(s.agents());
        for (NodeId k = 0; k < s.agents(); ++k) {
            agents_.emplace_back(k, s.h(k), s.y(k), s.graph().neighbors(k), s.steps(), sched);
        }
        std::iota(order_.begin(), order_.end(), NodeId{0});
        if (options.schedule_seed) shuffler_.emplace(*options.schedule_seed);
        net_.enable_audit(options.audit);
    }

    void round(std::size_t t) {
        net_.begin_round(t);
        reshuffle();
        for (NodeId k : order_) agents_[k].send_phase(t, net_);
        net_.close_sends();
        reshuffle();
        for (NodeId k : order_) agents_[k].receive_phase(t, net_);
        net_.end_round();
    }

    // Observer snapshot; agents never see it.
    lms::GlobalState snapshot() const {
        lms::GlobalState x(scenario_.agents(), scenario_.dim());
        for (NodeId k = 0; k < agents_.size(); ++k) x.block(k) = agents_[k].state();
        return x;
    }

    std::vector<Vector> states() const {
        std::vector<Vector> out;
        out.reserve(agents_.size());
        for (const auto& a : agents_) out.push_back(a.state());
        return out;
    }

    const CommStats& stats() const { return net_.stats(); }

private:
    void reshuffle() {
        if (shuffler_) std::shuffle(order_.begin(), order_.end(), *shuffler_);
    }

    const lms::Scenario& scenario_;
    const Variant& variant_;
    Transport net_;
    std::vector<AgentNode> agents_;
    std::vector<NodeId> order_;
    std::optional<Rng> shuffler_;
};

}  // namespace

DistributedResult run_distributed(const lms::Scenario& s, std::size_t iterations, const Variant& variant,
                                  const RunOptions& options) {
    Network network(s, variant, options);
    DistributedResult out;
    out.trajectory.states.reserve(iterations + 1);
    out.trajectory.states.push_back(network.snapshot());
    for (std::size_t t = 0; t < iterations; ++t) {
        network.round(t);
        out.trajectory.states.push_back(network.snapshot());
    }
    out.final_states = network.states();
    out.stats = network.stats();
    return out;
}

std::optional<CommStats> messages_to_target_ase(const lms::Scenario& s, double target, const Variant& variant,
                                                std::size_t max_rounds) {
    if (!(target > 0.0)) throw ConfigError("messages_to_target_ase: target must be positive");
    const Vector reference = lms::lms_solution(s);
    Network network(s, variant, {});
    if (lms::ase(network.snapshot(), reference) <= target) return network.stats();
    for (std::size_t t = 0; t < max_rounds; ++t) {
        network.round(t);
        if (lms::ase(network.snapshot(), reference) <= target) return network.stats();
    }
    return std::nullopt;
}

}  // namespace coop_lms::simnet
