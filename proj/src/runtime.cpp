#include "cdcop/runtime.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "cdcop/errors.hpp"

namespace cdcop {

const char* to_string(MessageKind kind) {
    switch (kind) {
    case MessageKind::Value: return "VALUE";
    case MessageKind::Cost: return "COST";
    case MessageKind::Best: return "BEST";
    }
    return "?";
}

std::size_t Message::payload_len() const {
    return kind == MessageKind::Best ? best.improved.size() : values.size();
}

Runtime::Runtime(const PseudoTree& tree, std::size_t payload_width)
    : tree_(tree), width_(payload_width), inbox_(tree.size()) {
    if (payload_width == 0) throw ConfigError("payload width (particle count) must be positive");
}

void Runtime::set_message_log(std::ostream* log) { log_ = log; }

void Runtime::send(Message msg, CycleStats& stats) {
    const std::size_t len = msg.payload_len();
    switch (msg.kind) {
    case MessageKind::Value: ++stats.value_messages; break;
    case MessageKind::Cost: ++stats.cost_messages; break;
    case MessageKind::Best: ++stats.best_messages; break;
    }
    stats.payload_scalars += len;
    stats.sent_scalars[static_cast<std::size_t>(msg.from)] += len;
    ++stats.sent_messages[static_cast<std::size_t>(msg.from)];
    ++sent_total_;
    if (log_) *log_ << cycle_ << ',' << to_string(msg.kind) << ',' << msg.from << ',' << msg.to << ',' << len << '\n';
    inbox_[static_cast<std::size_t>(msg.to)].push_back(std::move(msg));
}

std::vector<Message> Runtime::take(AgentId agent, MessageKind kind) {
    auto& box = inbox_[static_cast<std::size_t>(agent)];
    std::vector<Message> out;
    auto split = std::stable_partition(box.begin(), box.end(), [kind](const Message& m) { return m.kind != kind; });
    std::move(split, box.end(), std::back_inserter(out));
    box.erase(split, box.end());
    delivered_total_ += out.size();
    std::sort(out.begin(), out.end(), [](const Message& a, const Message& b) { return a.from < b.from; });
    return out;
}

CycleStats Runtime::run_cycle(std::span<ProtocolAgent* const> agents) {
    const std::size_t n = tree_.size();
    if (agents.size() != n) throw ProtocolError("agent count does not match the pseudo-tree");
    const auto started = std::chrono::steady_clock::now();
    ++cycle_;

    CycleStats stats;
    stats.cycle = cycle_;
    stats.sent_scalars.assign(n, 0);
    stats.sent_messages.assign(n, 0);
    stats.hops = 1 + 2 * tree_.height;

    // Phase 1: VALUE exchange.
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<double> payload = agents[a]->value_payload();
        if (payload.size() != width_) throw ProtocolError("VALUE payload from agent " + std::to_string(a) + " has wrong length");
        for (AgentId b : tree_.neighbors[a]) {
            send(Message{MessageKind::Value, static_cast<AgentId>(a), b, payload, {}}, stats);
        }
    }

    // Phase 2: COST convergecast. An agent fires once every child reported.
    std::vector<std::size_t> pending(n);
    std::deque<AgentId> ready;
    for (std::size_t a = 0; a < n; ++a) {
        pending[a] = tree_.children[a].size();
        if (pending[a] == 0) ready.push_back(static_cast<AgentId>(a));
    }
    std::size_t fired = 0;
    while (!ready.empty()) {
        const AgentId a = ready.front();
        ready.pop_front();
        const auto ai = static_cast<std::size_t>(a);
        std::vector<Message> values = take(a, MessageKind::Value);
        std::vector<Message> costs = take(a, MessageKind::Cost);
        if (values.size() != tree_.neighbors[ai].size() || costs.size() != tree_.children[ai].size()) {
            throw DeadlockDetected("agent " + std::to_string(a) + " is missing VALUE/COST messages in cycle " +
                                   std::to_string(cycle_));
        }
        std::vector<double> fitness = agents[ai]->convergecast(values, costs);
        ++fired;
        if (const auto parent = tree_.parent[ai]) {
            if (fitness.size() != width_) throw ProtocolError("COST payload from agent " + std::to_string(a) + " has wrong length");
            send(Message{MessageKind::Cost, a, *parent, std::move(fitness), {}}, stats);
            const auto pi = static_cast<std::size_t>(*parent);
            if (pending[pi] == 0) throw ProtocolError("agent " + std::to_string(a) + " reports to a parent that does not list it");
            if (--pending[pi] == 0) ready.push_back(*parent);
        }
    }
    if (fired != n) {
        throw DeadlockDetected("COST convergecast stalled after " + std::to_string(fired) + " of " + std::to_string(n) +
                               " agents in cycle " + std::to_string(cycle_));
    }

    // Phase 3: BEST broadcast, root first.
    std::deque<AgentId> order{tree_.root};
    std::size_t reached = 0;
    while (!order.empty()) {
        const AgentId a = order.front();
        order.pop_front();
        const auto ai = static_cast<std::size_t>(a);
        std::vector<Message> best = take(a, MessageKind::Best);
        const bool is_root = tree_.is_root(a);
        if (best.size() != (is_root ? 0u : 1u)) {
            throw DeadlockDetected("agent " + std::to_string(a) + " did not receive exactly one BEST in cycle " +
                                   std::to_string(cycle_));
        }
        BestPayload payload = agents[ai]->broadcast(is_root ? nullptr : &best.front());
        for (int k : payload.improved) {
            if (k < 0 || static_cast<std::size_t>(k) >= width_) throw ProtocolError("BEST index out of range");
        }
        if (payload.global_best &&
            std::find(payload.improved.begin(), payload.improved.end(), *payload.global_best) == payload.improved.end()) {
            throw ProtocolError("BEST global best particle is not among the improved particles");
        }
        ++reached;
        for (AgentId c : tree_.children[ai]) {
            send(Message{MessageKind::Best, a, c, {}, payload}, stats);
            order.push_back(c);
        }
    }
    if (reached != n) throw DeadlockDetected("BEST broadcast did not reach every agent");

    for (std::size_t a = 0; a < n; ++a) {
        if (!inbox_[a].empty()) throw ProtocolError("undelivered messages left for agent " + std::to_string(a));
    }

    // Local step.
    for (std::size_t a = 0; a < n; ++a) agents[a]->finish_cycle();

    stats.duration = std::chrono::steady_clock::now() - started;
    return stats;
}

std::vector<AgentMessageTotals> message_stats(std::span<const CycleStats> cycles) {
    std::vector<AgentMessageTotals> out;
    for (const auto& c : cycles) {
        if (out.size() < c.sent_scalars.size()) out.resize(c.sent_scalars.size());
        for (std::size_t a = 0; a < c.sent_scalars.size(); ++a) {
            out[a].messages += c.sent_messages[a];
            out[a].scalars += c.sent_scalars[a];
            out[a].max_scalars_per_cycle = std::max(out[a].max_scalars_per_cycle, c.sent_scalars[a]);
        }
    }
    return out;
}

bool within_message_size_bound(const CycleStats& stats, const PseudoTree& tree, std::size_t particles,
                               std::size_t slack) {
    for (std::size_t a = 0; a < tree.size(); ++a) {
        const std::size_t bound = particles * (tree.neighbors[a].size() + 1 + tree.children[a].size()) + slack;
        if (stats.sent_scalars[a] > bound) return false;
    }
    return true;
}

}  // namespace cdcop
