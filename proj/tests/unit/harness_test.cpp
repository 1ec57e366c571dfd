#include <doctest.h>

#include "lambdad/harness.hpp"
#include "lambdad/parser.hpp"
#include "lambdad/printer.hpp"
#include "support.hpp"

using namespace lambdad;

TEST_CASE("naturals, booleans and lists round-trip through their encodings") {
  for (std::uint64_t n : {0u, 1u, 7u}) CHECK(decode_nat(encode_nat(n)) == n);
  CHECK(print(encode_nat(2)) == "Inr (Inr (Inl ()))");
  CHECK(decode_bool(encode_bool(true)) == true);
  CHECK(decode_bool(encode_bool(false)) == false);
  std::vector<std::uint64_t> xs{3, 0, 2};
  CHECK(decode_nat_list(encode_nat_list(xs)) == xs);
  CHECK(decode_nat_list(encode_nat(3)) == std::nullopt);
}

TEST_CASE("trees round-trip and the level-order oracle numbers breadth first from one") {
  std::mt19937_64 rng(kSeed);
  for (int i = 0; i < 20; ++i) {
    Tree t = random_tree(rng, 15);
    auto back = decode_tree(encode_tree(t, true), true);
    REQUIRE(back);
    CHECK(tree_eq(*back, t));
  }
  auto leaf = [](std::uint64_t l) { return std::make_shared<TreeNode>(TreeNode{l, nullptr, nullptr}); };
  Tree t = std::make_shared<TreeNode>(TreeNode{9, std::make_shared<TreeNode>(TreeNode{9, leaf(9), nullptr}), leaf(9)});
  Tree r = oracle_level_order(t);
  CHECK(r->label == 1);
  CHECK(r->left->label == 2);
  CHECK(r->right->label == 3);
  CHECK(r->left->left->label == 4);
}

TEST_CASE("fifo oracle") {
  std::vector<QueueOp> ops{1, 2, std::nullopt, 3, std::nullopt, std::nullopt, std::nullopt};
  FifoResult r = oracle_fifo(ops);
  CHECK(r.dequeued == std::vector<std::optional<std::uint64_t>>{1, 2, 3, std::nullopt});
  CHECK(r.remaining.empty());
  CHECK(oracle_map_succ({0, 4}) == std::vector<std::uint64_t>{1, 5});
}

TEST_CASE("random inputs respect their bounds") {
  std::mt19937_64 rng(kSeed);
  for (int i = 0; i < 50; ++i) {
    CHECK(random_list(rng, 8, 3).size() <= 8);
    CHECK(tree_size(random_tree(rng, 31)) <= 31);
    CHECK(random_ops(rng, 64).size() <= 64);
  }
}

TEST_CASE("metatheory checks pass on a recorded run") {
  auto b = testing::build("def c : List 1 = () :: Inl ()", "c", true);
  auto r = testing::run_built(b, true);
  std::size_t coercions = 0;
  auto pres = check_preservation(b.env.types(), r.trace, b.type, &coercions);
  CHECK_MESSAGE(pres.ok, (pres.failures.empty() ? "" : pres.failures[0].description));
  CHECK(check_progress_determinism(r.trace).ok);
  CHECK(scan_balance(r.trace).ok);
  CHECK(coercions == 0);
}

TEST_CASE("balance flags a hole without its destination") {
  auto v = parse_value("{4}/[]4, ()/");
  REQUIRE(ok(v));
  CHECK_FALSE(scan_balance(initial(tm::val(value(v)))).ok);
}

TEST_CASE("step counting") {
  auto b = testing::build(testing::dlist_concat_program(4), "joined");
  auto n = count_steps(b.term, 100000);
  REQUIRE(n);
  CHECK(*n == testing::run_built(b, false).steps);
  CHECK_FALSE(count_steps(b.term, 3));
}
