#pragma once

#include "lambdad/ast.hpp"
#include "lambdad/context.hpp"
#include "lambdad/machine.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lambdad {

// ---------------------------------------------------------------- verdicts

struct Failure {
  std::size_t step = 0;  // 0 is the origin command
  std::string description;
};

struct Verdict {
  bool ok = true;
  std::vector<Failure> failures;

  void fail(std::size_t step, std::string d) {
    ok = false;
    failures.push_back({step, std::move(d)});
  }
};

// Commands of a trace in order, origin first.
std::vector<const Command *> trace_commands(const Trace &tr);

// Every command types at `type` (the origin's type). Destination values are
// checked without the mode coercion first; commands that only pass with it
// are counted in *coercions.
Verdict check_preservation(const TypeDefs &defs, const Trace &tr, const TypeP &type,
                           std::size_t *coercions = nullptr);

// Every non-final command has exactly one applicable rule, the one recorded;
// `outcome` is the run's outcome (a Stuck run fails at its last command).
Verdict check_progress_determinism(const Trace &tr, RunResult::Outcome outcome = RunResult::Outcome::Finished);

// One hole and one destination per bound name.
Verdict scan_balance(const Command &c);
Verdict scan_balance(const Trace &tr);

// Stepped transitions until Final; nullopt when fuel runs out or the run is stuck.
std::optional<std::uint64_t> count_steps(const TermP &program, std::uint64_t fuel);

// Brute-force derivability over the declarative rules, for terms of at most
// `size_bound` nodes. Throws std::length_error above the bound.
bool oracle_declarative_check(const TypeDefs &defs, const TermP &t, const TypingContext &gamma,
                              std::size_t size_bound = 12);

// ---------------------------------------------------------------- encodings

ValueP encode_nat(std::uint64_t n);
std::optional<std::uint64_t> decode_nat(const ValueP &v);
ValueP encode_bool(bool b);
std::optional<bool> decode_bool(const ValueP &v);
ValueP encode_list(const std::vector<ValueP> &xs);
std::optional<std::vector<ValueP>> decode_list(const ValueP &v);
ValueP encode_nat_list(const std::vector<std::uint64_t> &xs);
std::optional<std::vector<std::uint64_t>> decode_nat_list(const ValueP &v);

struct TreeNode;
using Tree = std::shared_ptr<const TreeNode>;  // null is the empty tree
struct TreeNode {
  std::uint64_t label = 0;
  Tree left, right;
};

std::size_t tree_size(const Tree &t);
bool tree_eq(const Tree &a, const Tree &b);
std::string tree_str(const Tree &t);
// Labels are encoded as unit when `nat_labels` is false.
ValueP encode_tree(const Tree &t, bool nat_labels);
std::optional<Tree> decode_tree(const ValueP &v, bool nat_labels);

// Queue operations: nullopt dequeues, a number enqueues it.
using QueueOp = std::optional<std::uint64_t>;
ValueP encode_ops(const std::vector<QueueOp> &ops);

struct FifoResult {
  std::vector<std::optional<std::uint64_t>> dequeued;  // nullopt when empty
  std::vector<std::uint64_t> remaining;
  bool operator==(const FifoResult &) const = default;
};
std::optional<FifoResult> decode_fifo(const ValueP &v);

// ---------------------------------------------------------------- oracles

std::vector<std::uint64_t> oracle_map_succ(const std::vector<std::uint64_t> &xs);
Tree oracle_level_order(const Tree &t);
FifoResult oracle_fifo(const std::vector<QueueOp> &ops);

// ---------------------------------------------------------------- inputs

inline constexpr std::uint64_t kSeed = 0x1d5eed;

std::vector<std::uint64_t> random_list(std::mt19937_64 &rng, std::size_t max_len = 32, std::uint64_t max_elem = 15);
// Uniform over shapes of a uniformly chosen node count.
Tree random_tree(std::mt19937_64 &rng, std::size_t max_nodes = 31);
std::vector<QueueOp> random_ops(std::mt19937_64 &rng, std::size_t max_len = 64, double enqueue_ratio = 0.6,
                                std::uint64_t max_elem = 15);

}  // namespace lambdad
