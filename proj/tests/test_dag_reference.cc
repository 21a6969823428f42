#include "lazydist/dag_reference.h"

#include <algorithm>
#include <random>

#include <catch_amalgamated.hpp>

using namespace lazydist;

namespace {

lazydist::access wr(block_key b, index_t start, index_t count) { return lazydist::access{b, {make_slice(start, count, 1)}, access_mode::write}; }

std::vector<lazydist::access> random_accesses(std::mt19937_64& rng, int blocks) {
	std::vector<lazydist::access> acc;
	const auto n = 1 + rng() % 3;
	for(std::uint64_t i = 0; i < n; ++i) {
		const index_t start = static_cast<index_t>(rng() % 6);
		const index_t step = 1 + static_cast<index_t>(rng() % 2);
		const index_t count = 1 + static_cast<index_t>(rng() % 3);
		acc.push_back(lazydist::access{block_key{1, static_cast<index_t>(rng() % static_cast<std::uint64_t>(blocks))}, {make_slice(start, count, step)},
		    rng() % 2 == 0 ? access_mode::read : access_mode::write});
	}
	return acc;
}

} // namespace

TEST_CASE("first insertion has nothing to compare against") {
	dag_reference dag;
	dag.insert(1, 0, op_class::computation, {wr(block_key{1, 0}, 0, 3)});
	CHECK(dag.comparison_count() == 0);
	CHECK(dag.in_degree(1) == 0);
}

TEST_CASE("inserting n operations performs n(n-1)/2 comparisons") {
	for(const int n : {1, 2, 10, 57}) {
		dag_reference dag;
		for(int i = 0; i < n; ++i) {
			dag.insert(static_cast<op_id>(i + 1), 0, op_class::computation, {wr(block_key{1, i}, 0, 1)});
		}
		CHECK(dag.comparison_count() == static_cast<std::size_t>(n * (n - 1) / 2));
		CHECK(dag.edges().empty());
	}
}

TEST_CASE("removal releases successors") {
	dag_reference dag;
	const block_key b{1, 0};
	dag.insert(1, 0, op_class::computation, {wr(b, 0, 3)});
	dag.insert(2, 0, op_class::computation, {wr(b, 1, 1)});
	dag.insert(3, 1, op_class::communication, {wr(block_key{2, 0}, 0, 1)});
	CHECK(dag.in_degree(2) == 1);
	CHECK_THROWS_AS(dag.remove(2), invariant_violation);
	CHECK(dag.remove(1) == std::vector<op_id>{2});
	CHECK(dag.live_ops() == std::vector<op_id>{2, 3});
}

TEST_CASE("DOT output names nodes and edges") {
	dag_reference dag;
	const block_key b{1, 0};
	dag.insert(1, 0, op_class::computation, {wr(b, 0, 3)});
	dag.insert(2, 1, op_class::communication, {wr(b, 0, 1)});
	const auto dot = dag.dump_dot();
	CHECK(dot.rfind("digraph", 0) == 0);
	CHECK(dot.find("op1 -> op2") != std::string::npos);
	CHECK(dot.find("rank1 comm") != std::string::npos);
}

TEST_CASE("heuristic counters track the DAG in-degrees through random retirement") {
	std::mt19937_64 rng(5);
	for(int program = 0; program < 40; ++program) {
		dependency_system deps;
		dag_reference dag;
		deps.set_record_edges(true);
		op_id next = 1;
		const int blocks = 1 + static_cast<int>(rng() % 4);
		const int length = 1 + static_cast<int>(rng() % 60);
		for(int step = 0; step < length; ++step) {
			if(rng() % 3 != 0 || deps.empty()) {
				const auto acc = random_accesses(rng, blocks);
				const auto cls = rng() % 2 == 0 ? op_class::computation : op_class::communication;
				deps.insert(next, 0, cls, acc);
				dag.insert(next, 0, cls, acc);
				++next;
			} else {
				auto ready = deps.ready_ops(0, op_class::computation);
				const auto comm = deps.ready_ops(0, op_class::communication);
				ready.insert(ready.end(), comm.begin(), comm.end());
				REQUIRE_FALSE(ready.empty());
				const auto id = ready[rng() % ready.size()];
				deps.take(id);
				auto a = deps.retire(id);
				auto b = dag.remove(id);
				std::sort(a.begin(), a.end());
				std::sort(b.begin(), b.end());
				CHECK(a == b);
			}
			for(const auto id : dag.live_ops()) {
				CHECK(deps.counter(id) == dag.in_degree(id));
			}
		}
		CHECK(deps.recorded_edges() == dag.edges());
	}
}
