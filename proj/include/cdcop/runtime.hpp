#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cdcop/pseudo_tree.hpp"

namespace cdcop {

enum class MessageKind : std::uint8_t { Value, Cost, Best };

const char* to_string(MessageKind kind);

/// Payload of a BEST message. `improved` lists particles whose p_best moved;
/// `global_best` is set only when the swarm-wide best strictly improved, and
/// that particle is always a member of `improved`.
struct BestPayload {
    std::vector<int> improved;
    std::optional<int> global_best;

    friend bool operator==(const BestPayload&, const BestPayload&) = default;
};

struct Message {
    MessageKind kind = MessageKind::Value;
    AgentId from = 0;
    AgentId to = 0;
    std::vector<double> values;  // VALUE positions or COST fitness, length K
    BestPayload best;            // BEST only

    /// Scalars carried: K for VALUE/COST, |improved| for BEST (the global
    /// best is flagged in place, not sent separately).
    std::size_t payload_len() const;
};

struct CycleStats {
    int cycle = 0;
    std::size_t value_messages = 0;
    std::size_t cost_messages = 0;
    std::size_t best_messages = 0;
    std::size_t payload_scalars = 0;
    std::vector<std::size_t> sent_scalars;   // per agent
    std::vector<std::size_t> sent_messages;  // per agent
    int hops = 0;  // 1 VALUE hop + convergecast depth + broadcast depth
    std::chrono::nanoseconds duration{0};

    std::size_t total_messages() const { return value_messages + cost_messages + best_messages; }
};

/// Hooks one agent exposes to the runtime. Each cycle runs three barriered
/// sub-phases and then a local step:
///   1. value_payload() on every agent; sent to every neighbor.
///   2. convergecast() once all VALUE from neighbors and COST from children
///      are delivered; the result goes to the parent as COST (root: kept).
///   3. broadcast() root first, then each child after its parent's BEST
///      arrives; the result goes to every child as BEST.
///   4. finish_cycle() on every agent, no messaging.
class ProtocolAgent {
public:
    virtual ~ProtocolAgent() = default;

    virtual std::vector<double> value_payload() = 0;
    virtual std::vector<double> convergecast(std::span<const Message> values, std::span<const Message> costs) = 0;
    virtual BestPayload broadcast(const Message* from_parent) = 0;
    virtual void finish_cycle() = 0;
};

/// Deterministic synchronous message-passing substrate over a pseudo-tree.
class Runtime {
public:
    Runtime(const PseudoTree& tree, std::size_t payload_width);

    /// Runs one full cycle over `agents` (indexed by AgentId).
    /// Throws DeadlockDetected when a phase cannot make progress and
    /// ProtocolError on malformed payloads.
    CycleStats run_cycle(std::span<ProtocolAgent* const> agents);

    /// Optional CSV sink: `cycle,kind,from,to,payload_len`.
    void set_message_log(std::ostream* log);

    int cycles_run() const { return cycle_; }
    std::size_t messages_sent() const { return sent_total_; }
    std::size_t messages_delivered() const { return delivered_total_; }

private:
    void send(Message msg, CycleStats& stats);
    std::vector<Message> take(AgentId agent, MessageKind kind);

    PseudoTree tree_;
    std::size_t width_;
    std::vector<std::vector<Message>> inbox_;
    std::ostream* log_ = nullptr;
    int cycle_ = 0;
    std::size_t sent_total_ = 0;
    std::size_t delivered_total_ = 0;
};

/// Per-agent totals over a sequence of cycles.
struct AgentMessageTotals {
    std::size_t messages = 0;
    std::size_t scalars = 0;
    std::size_t max_scalars_per_cycle = 0;
};

std::vector<AgentMessageTotals> message_stats(std::span<const CycleStats> cycles);

/// Per-agent per-cycle scalar budget K * (|N_i| + 1 + |CH_i|) + slack.
bool within_message_size_bound(const CycleStats& stats, const PseudoTree& tree, std::size_t particles,
                               std::size_t slack);

}  // namespace cdcop
