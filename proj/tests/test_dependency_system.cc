#include "lazydist/dependency_system.h"

#include <catch_amalgamated.hpp>

using namespace lazydist;

namespace {

const block_key blk0{1, 0};
const block_key blk1{1, 1};

lazydist::access rd(block_key b, index_t start, index_t count) { return lazydist::access{b, {make_slice(start, count, 1)}, access_mode::read}; }
lazydist::access wr(block_key b, index_t start, index_t count) { return lazydist::access{b, {make_slice(start, count, 1)}, access_mode::write}; }

} // namespace

TEST_CASE("conflict requires a shared element and a write") {
	CHECK_FALSE(conflict(rd(blk0, 0, 3), rd(blk0, 0, 3)));
	CHECK(conflict(rd(blk0, 0, 3), wr(blk0, 2, 1)));
	CHECK(conflict(wr(blk0, 0, 3), wr(blk0, 1, 1)));
	CHECK_FALSE(conflict(wr(blk0, 0, 2), wr(blk0, 2, 1)));
	CHECK_FALSE(conflict(wr(blk0, 0, 3), wr(blk1, 0, 3)));
	// Interleaved strides never touch the same element.
	const lazydist::access even{blk0, {make_slice(0, 4, 2)}, access_mode::write};
	const lazydist::access odd{blk0, {make_slice(1, 4, 2)}, access_mode::write};
	CHECK_FALSE(conflict(even, odd));
	const lazydist::access every_third{blk0, {make_slice(0, 3, 3)}, access_mode::read};
	CHECK(conflict(odd, every_third)); // both contain element 3
}

TEST_CASE("independent operations are ready immediately") {
	dependency_system deps;
	deps.insert(1, 0, op_class::computation, {wr(blk0, 0, 3)});
	deps.insert(2, 0, op_class::computation, {wr(blk1, 0, 3)});
	deps.insert(3, 1, op_class::communication, {rd(blk1, 0, 3)});
	CHECK(deps.counter(1) == 0);
	CHECK(deps.counter(2) == 0);
	CHECK(deps.counter(3) == 1);
	CHECK(deps.ready_ops(0, op_class::computation) == std::vector<op_id>{1, 2});
	CHECK(deps.ready_ops(1, op_class::communication).empty());
}

TEST_CASE("a chain of k writes has counters 0..k-1 against the same range") {
	constexpr int k = 6;
	dependency_system deps;
	for(int i = 0; i < k; ++i) {
		deps.insert(static_cast<op_id>(i + 1), 0, op_class::computation, {wr(blk0, 0, 3)});
	}
	// Each write conflicts with every earlier live write to the same elements.
	for(int i = 0; i < k; ++i) {
		CHECK(deps.counter(static_cast<op_id>(i + 1)) == i);
	}
	for(int i = 0; i < k; ++i) {
		const auto id = deps.take_ready(0, op_class::computation);
		CHECK(id == static_cast<op_id>(i + 1));
		const auto promoted = deps.retire(id);
		if(i + 1 < k) {
			CHECK(promoted == std::vector<op_id>{static_cast<op_id>(i + 2)});
		}
		for(int j = i + 1; j < k; ++j) {
			CHECK(deps.counter(static_cast<op_id>(j + 1)) == j - i - 1);
		}
	}
	CHECK(deps.empty());
}

TEST_CASE("readers share, a writer waits for all of them") {
	dependency_system deps;
	deps.insert(1, 0, op_class::computation, {rd(blk0, 0, 3)});
	deps.insert(2, 0, op_class::computation, {rd(blk0, 1, 2)});
	deps.insert(3, 0, op_class::computation, {wr(blk0, 0, 3)});
	CHECK(deps.counter(3) == 2);
	deps.take(1);
	CHECK(deps.retire(1).empty());
	CHECK(deps.counter(3) == 1);
	deps.take(2);
	CHECK(deps.retire(2) == std::vector<op_id>{3});
	CHECK(deps.state(3) == dependency_system::op_state::ready);
	deps.check_ready_completeness();
}

TEST_CASE("retiring an operation with pending dependencies is rejected") {
	dependency_system deps;
	deps.insert(1, 0, op_class::computation, {wr(blk0, 0, 3)});
	deps.insert(2, 0, op_class::computation, {rd(blk0, 0, 1)});
	CHECK_THROWS_AS(deps.retire(2), invariant_violation);
	CHECK_THROWS_AS(deps.retire(99), invariant_violation);
	CHECK_THROWS_AS(deps.insert(1, 0, op_class::computation, {}), invariant_violation);
}

TEST_CASE("an operation does not depend on its own accesses") {
	dependency_system deps;
	deps.insert(1, 0, op_class::computation, {rd(blk0, 0, 3), wr(blk0, 0, 3)});
	CHECK(deps.counter(1) == 0);
	CHECK(deps.has_ready(0, op_class::computation));
}

TEST_CASE("ready queues are partitioned by rank and class") {
	dependency_system deps;
	deps.insert(1, 0, op_class::communication, {wr(staging_key(1), 0, 3)});
	deps.insert(2, 1, op_class::communication, {wr(staging_key(2), 0, 3)});
	deps.insert(3, 1, op_class::computation, {wr(blk1, 0, 3)});
	CHECK(deps.ready_ops(op_class::communication) == std::vector<op_id>{1, 2});
	CHECK(deps.ready_count(1, op_class::computation) == 1);
	CHECK(deps.ready_count(0, op_class::computation) == 0);
	CHECK(deps.ranks() == std::set<rank_t>{0, 1});
}

TEST_CASE("recorded edges and counters agree with a pairwise scan") {
	dependency_system deps;
	deps.set_record_edges(true);
	deps.insert(1, 0, op_class::computation, {wr(blk0, 0, 3)});
	deps.insert(2, 0, op_class::communication, {rd(blk0, 2, 1)});
	deps.insert(3, 0, op_class::computation, {rd(blk0, 0, 2), wr(blk1, 0, 1)});
	deps.insert(4, 0, op_class::computation, {wr(blk0, 1, 2)});
	const std::set<std::pair<op_id, op_id>> expected{{1, 2}, {1, 3}, {1, 4}, {2, 4}, {3, 4}};
	CHECK(deps.recorded_edges() == expected);
	CHECK(deps.counter(4) == 3);
}

TEST_CASE("dump lists each block's lazydist::access-nodes in order") {
	dependency_system deps;
	deps.insert(1, 0, op_class::computation, {wr(blk0, 0, 3)});
	deps.insert(2, 0, op_class::computation, {rd(blk0, 1, 1)});
	const auto text = deps.dump();
	CHECK(text.find("array1:0") != std::string::npos);
	CHECK(text.find("op=1 W") < text.find("op=2 R"));
}
