#include "lazydist/runtime.h"

#include <algorithm>

#include <catch_amalgamated.hpp>

using namespace lazydist;

namespace {

region r1(index_t start, index_t count, index_t step = 1) { return {make_slice(start, count, step)}; }

std::vector<scalar> ints(std::initializer_list<std::int64_t> v) {
	std::vector<scalar> out;
	for(const auto x : v) {
		out.emplace_back(x);
	}
	return out;
}

struct stencil_program {
	runtime rt;
	array_view m, n;

	explicit stencil_program(runtime_config cfg) : rt(cfg) {
		m = rt.create_array({6}, {3}, dtype::i64, ints({1, 2, 3, 4, 5, 6}));
		n = rt.create_array({6}, {3}, dtype::i64);
		rt.record_ufunc(ufuncs::add(), slice_view(n, r1(1, 4)), {slice_view(m, r1(2, 4)), slice_view(m, r1(0, 4))});
	}
};

runtime_config two_ranks() {
	runtime_config cfg;
	cfg.nprocs = 2;
	return cfg;
}

std::size_t count_kind(const deferred_program& p, op_kind k) {
	return static_cast<std::size_t>(std::count_if(p.nodes.begin(), p.nodes.end(), [&](const recorded_op& o) { return o.kind == k; }));
}

} // namespace

TEST_CASE("three-point stencil records twelve operation-nodes, six of them ready") {
	stencil_program p(two_ranks());
	const auto& prog = p.rt.program();
	REQUIRE(prog.nodes.size() == 12);
	CHECK(count_kind(prog, op_kind::fill) == 4);
	CHECK(count_kind(prog, op_kind::send) == 2);
	CHECK(count_kind(prog, op_kind::recv) == 2);
	CHECK(count_kind(prog, op_kind::compute) == 4);

	std::vector<op_id> ready;
	for(const auto cls : {op_class::communication, op_class::computation}) {
		const auto r = p.rt.deps().ready_ops(cls);
		ready.insert(ready.end(), r.begin(), r.end());
	}
	std::sort(ready.begin(), ready.end());
	// The four fills and both receives into staging buffers have no predecessors.
	std::vector<op_id> expected;
	for(const auto& node : prog.nodes) {
		if(node.kind == op_kind::fill || node.kind == op_kind::recv) expected.push_back(node.id);
	}
	CHECK(ready == expected);
	CHECK(ready.size() == 6);

	// Each rank sends one element of M and receives one element into a staging buffer.
	for(const auto& node : prog.nodes) {
		if(node.kind != op_kind::send) continue;
		const auto& s = std::get<send_payload>(node.payload);
		CHECK(s.dst != node.rank);
		CHECK(region_size(s.src.range) == 1);
	}
}

TEST_CASE("three-point stencil result") {
	stencil_program p(two_ranks());
	CHECK(p.rt.read_i64(slice_view(p.n, r1(1, 4))) == std::vector<std::int64_t>{4, 6, 8, 10});
	CHECK(p.rt.read_i64(p.n) == std::vector<std::int64_t>{0, 4, 6, 8, 10, 0});
	CHECK(p.rt.program().nodes.empty());
	const auto m = p.rt.metrics();
	CHECK(m.messages == 2);
	CHECK(m.bytes == 16);
	CHECK(m.flushes == 1);
}

TEST_CASE("write-back execution gives the same result") {
	auto cfg = two_ranks();
	cfg.policy = exec_policy::view_block_first;
	stencil_program p(cfg);
	CHECK(p.rt.program().nodes.size() == 12);
	CHECK(p.rt.read_i64(p.n) == std::vector<std::int64_t>{0, 4, 6, 8, 10, 0});
}

TEST_CASE("aligned operations move no data") {
	runtime_config cfg;
	cfg.nprocs = 4;
	runtime rt(cfg);
	std::vector<scalar> init;
	for(int i = 0; i < 64; ++i) {
		init.emplace_back(static_cast<double>(i));
	}
	const auto a = rt.create_array({8, 8}, {2, 2}, dtype::f64, init);
	const auto b = rt.create_array({8, 8}, {2, 2}, dtype::f64);
	rt.record_ufunc(ufuncs::multiply(), b, {a, scalar{2.0}});
	rt.record_ufunc(ufuncs::add(), b, {b, a});
	CHECK(count_kind(rt.program(), op_kind::send) == 0);
	const auto out = rt.read_f64(b);
	for(int i = 0; i < 64; ++i) {
		CHECK(out[static_cast<std::size_t>(i)] == 3.0 * i);
	}
	CHECK(rt.metrics().bytes == 0);
}

TEST_CASE("flush threshold counts delayed array operations") {
	SECTION("threshold 2 flushes once both arrays exist") {
		auto cfg = two_ranks();
		cfg.flush_threshold = 2;
		stencil_program p(cfg);
		CHECK(p.rt.metrics().flushes == 1);
		CHECK(p.rt.program().delayed_ops == 1);
		CHECK(p.rt.program().nodes.size() == 8);
	}
	SECTION("threshold 1000 defers everything until the read") {
		auto cfg = two_ranks();
		cfg.flush_threshold = 1000;
		stencil_program p(cfg);
		CHECK(p.rt.metrics().flushes == 0);
		CHECK(p.rt.program().delayed_ops == 3);
		p.rt.read_i64(p.n);
		CHECK(p.rt.metrics().flushes == 1);
	}
	SECTION("threshold 0 flushes after every operation") {
		auto cfg = two_ranks();
		cfg.flush_threshold = 0;
		stencil_program p(cfg);
		CHECK(p.rt.metrics().flushes == 3);
		CHECK(p.rt.program().nodes.empty());
		CHECK(p.rt.read_i64(p.n) == std::vector<std::int64_t>{0, 4, 6, 8, 10, 0});
	}
}

TEST_CASE("empty views") {
	runtime rt(two_ranks());
	const auto m = rt.create_array({6}, {3}, dtype::i64, ints({1, 2, 3, 4, 5, 6}));
	const auto empty = slice_view(m, r1(2, 0));
	CHECK(rt.read_elements(empty).empty());
	const auto nodes = rt.metrics().nodes;
	rt.record_ufunc(ufuncs::add(), empty, {empty, scalar{std::int64_t{1}}});
	CHECK(rt.metrics().nodes == nodes);
}

TEST_CASE("partially overlapping input and output are rejected") {
	runtime rt(two_ranks());
	const auto m = rt.create_array({6}, {3}, dtype::i64, ints({1, 2, 3, 4, 5, 6}));
	CHECK_THROWS_AS(rt.record_copy(slice_view(m, r1(1, 4)), slice_view(m, r1(0, 4))), std::invalid_argument);
	// Disjoint slices of the same array and identical selections are fine.
	rt.record_copy(slice_view(m, r1(0, 2)), slice_view(m, r1(4, 2)));
	rt.record_ufunc(ufuncs::add(), m, {m, m});
	CHECK(rt.read_i64(m) == std::vector<std::int64_t>{10, 12, 6, 8, 10, 12});
}

TEST_CASE("self-copy records nothing") {
	runtime rt(two_ranks());
	const auto m = rt.create_array({6}, {3}, dtype::i64);
	const auto nodes = rt.metrics().nodes;
	rt.record_copy(m, m);
	CHECK(rt.metrics().nodes == nodes);
}

TEST_CASE("copy into a shifted window") {
	runtime rt(two_ranks());
	const auto m = rt.create_array({6}, {3}, dtype::i64, ints({1, 2, 3, 4, 5, 6}));
	const auto n = rt.create_array({6}, {3}, dtype::i64);
	rt.record_copy(slice_view(n, r1(1, 4)), slice_view(m, r1(0, 4)));
	CHECK(rt.read_i64(n) == std::vector<std::int64_t>{0, 1, 2, 3, 4, 0});
}

TEST_CASE("operand validation") {
	runtime rt(two_ranks());
	const auto a = rt.create_array({6}, {3}, dtype::i64);
	const auto f = rt.create_array({6}, {3}, dtype::f64);
	CHECK_THROWS_AS(rt.record_ufunc(ufuncs::add(), a, {a}), std::invalid_argument);
	CHECK_THROWS_AS(rt.record_ufunc(ufuncs::add(), a, {a, f}), std::invalid_argument);
	CHECK_THROWS_AS(rt.record_ufunc(ufuncs::add(), slice_view(a, r1(0, 3)), {a, a}), std::invalid_argument);
	CHECK_THROWS_AS(rt.record_ufunc(ufuncs::add(), a, {a, scalar{0.5}}), std::invalid_argument);
	CHECK_THROWS_AS(rt.create_array({6}, {3}, dtype::i64, ints({1, 2})), std::invalid_argument);

	runtime other(two_ranks());
	const auto foreign = other.create_array({6}, {3}, dtype::i64);
	CHECK_THROWS_AS(rt.record_copy(a, foreign), std::invalid_argument);
}

TEST_CASE("integer arithmetic wraps") {
	runtime rt(two_ranks());
	const auto a = rt.create_array({2}, {1}, dtype::i64, ints({INT64_MAX, INT64_MIN}));
	rt.record_ufunc(ufuncs::add(), a, {a, scalar{std::int64_t{1}}});
	CHECK(rt.read_i64(a) == std::vector<std::int64_t>{INT64_MIN, INT64_MIN + 1});
}
