#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "heftsim/error.hpp"

namespace heftsim {

// Simulation time, integer nanoseconds. Overflow is a hard error.
using SimTime = std::uint64_t;

inline SimTime checked_add(SimTime a, SimTime b) {
  if (a > std::numeric_limits<SimTime>::max() - b) {
    throw SimError(ErrorCode::TimeOverflow, "simulation time overflow");
  }
  return a + b;
}

// Sentinel for a PE that cannot run a given task.
inline constexpr std::uint64_t kUnsupported =
    std::numeric_limits<std::uint64_t>::max();

struct PeDescriptor {
  int pe_id = 0;
  std::string name;
};

// Round-half-up mean over supported entries only.
inline std::uint64_t task_average(const std::vector<std::uint64_t>& exec) {
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  for (std::uint64_t t : exec) {
    if (t == kUnsupported) continue;
    sum += t;
    ++count;
  }
  if (count == 0) {
    throw SimError(ErrorCode::NoSupportedPe, "task supports no PE");
  }
  return (sum + count / 2) / count;
}

// One schedulable DAG node: per-PE execution times (ns) and their average.
struct TaskRecord {
  std::uint64_t tid = 0;
  std::vector<std::uint64_t> exec;  // ns per PE, kUnsupported where absent
  std::uint64_t avg = 0;            // ns, task_average(exec)

  static TaskRecord make(std::uint64_t tid, std::vector<std::uint64_t> exec) {
    TaskRecord rec;
    rec.tid = tid;
    rec.avg = task_average(exec);
    rec.exec = std::move(exec);
    return rec;
  }

  bool supports(int pe) const { return exec[static_cast<size_t>(pe)] != kUnsupported; }
};

// (task, PE, predicted finish) emitted by either scheduler engine.
// predicted_finish is in scheduler time units when produced by the hardware
// model or by the software reference in quantized mode, raw ns otherwise.
struct MappingDecision {
  std::uint64_t tid = 0;
  int pe_id = 0;
  std::uint64_t predicted_finish = 0;

  friend bool operator==(const MappingDecision&, const MappingDecision&) = default;
};

struct DagNode {
  int node_id = 0;
  std::vector<std::uint64_t> exec;  // ns per PE, kUnsupported allowed
};

struct DagEdge {
  int from = 0;
  int to = 0;
};

// Application template: DAG structure plus per-node exec tables.
struct AppDag {
  std::string template_name;
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;

  std::vector<int> successors(int node) const {
    std::vector<int> out;
    for (const auto& e : edges) {
      if (e.from == node) out.push_back(e.to);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> predecessors(int node) const {
    std::vector<int> out;
    for (const auto& e : edges) {
      if (e.to == node) out.push_back(e.from);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Kahn's algorithm with lowest-node-id tie-break. Throws on invalid DAGs.
inline std::vector<int> validate_dag(const AppDag& dag) {
  const int n = static_cast<int>(dag.nodes.size());
  if (n == 0) {
    throw SimError(ErrorCode::EmptyDag, "DAG '" + dag.template_name + "' has no nodes");
  }
  for (int i = 0; i < n; ++i) {
    if (dag.nodes[static_cast<size_t>(i)].node_id != i) {
      throw SimError(ErrorCode::ValidationError,
                     "DAG '" + dag.template_name + "': node ids are not dense from 0");
    }
  }
  std::vector<int> indegree(static_cast<size_t>(n), 0);
  for (const auto& e : dag.edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw SimError(ErrorCode::DanglingEdge,
                     "DAG '" + dag.template_name + "': edge " + std::to_string(e.from) +
                         "->" + std::to_string(e.to) + " leaves the node range");
    }
    ++indegree[static_cast<size_t>(e.to)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> frontier;
  for (int i = 0; i < n; ++i) {
    if (indegree[static_cast<size_t>(i)] == 0) frontier.push(i);
  }
  std::vector<int> order;
  order.reserve(static_cast<size_t>(n));
  while (!frontier.empty()) {
    int node = frontier.top();
    frontier.pop();
    order.push_back(node);
    for (int succ : dag.successors(node)) {
      if (--indegree[static_cast<size_t>(succ)] == 0) frontier.push(succ);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    for (int i = 0; i < n; ++i) {
      if (indegree[static_cast<size_t>(i)] > 0) {
        throw SimError(ErrorCode::CycleDetected,
                       "DAG '" + dag.template_name + "': node " + std::to_string(i) +
                           " lies on a cycle");
      }
    }
  }
  return order;
}

enum class NodeState { Waiting, Ready, Scheduled, Running, Done };

struct NodeProgress {
  NodeState state = NodeState::Waiting;
  int pe_id = -1;
  SimTime start = 0;
  SimTime finish = 0;
};

// One arrived application instance with per-node completion state.
struct AppInstance {
  std::uint64_t instance_id = 0;
  std::shared_ptr<const AppDag> dag;
  SimTime arrival_time = 0;
  std::vector<NodeProgress> progress;

  static AppInstance make(std::uint64_t id, std::shared_ptr<const AppDag> dag,
                          SimTime arrival) {
    AppInstance inst;
    inst.instance_id = id;
    inst.arrival_time = arrival;
    inst.progress.resize(dag->nodes.size());
    inst.dag = std::move(dag);
    return inst;
  }

  bool complete() const {
    return std::all_of(progress.begin(), progress.end(),
                       [](const NodeProgress& p) { return p.state == NodeState::Done; });
  }
};

// Nodes whose predecessors are all done and that are still waiting.
inline std::vector<int> ready_nodes(const AppInstance& instance) {
  std::vector<int> out;
  for (int node = 0; node < static_cast<int>(instance.progress.size()); ++node) {
    if (instance.progress[static_cast<size_t>(node)].state != NodeState::Waiting) continue;
    bool ready = true;
    for (int pred : instance.dag->predecessors(node)) {
      if (instance.progress[static_cast<size_t>(pred)].state != NodeState::Done) {
        ready = false;
        break;
      }
    }
    if (ready) out.push_back(node);
  }
  return out;
}

}  // namespace heftsim
