#include "lazydist/bench.h"

#include <catch_amalgamated.hpp>

using namespace lazydist;

namespace {

benchmark_spec small(kernel_kind k) {
	benchmark_spec s;
	s.kernel = k;
	s.size = 23;
	s.block = 4;
	s.iters = 2;
	s.ranks = {1, 2, 5};
	return s;
}

} // namespace

TEST_CASE("three-point stencil benchmark on six elements") {
	benchmark_spec s;
	s.size = 6;
	s.block = 3;
	s.ranks = {2};
	const auto run = run_distributed(s, 2, flush_mode::latency_hiding, true);
	std::vector<std::int64_t> got;
	for(const auto& v : run.result.values) {
		got.push_back(std::get<std::int64_t>(v));
	}
	CHECK(got == std::vector<std::int64_t>{0, 4, 6, 8, 10, 0});
	CHECK(run.log.find("kind=send event=initiate") < run.log.find("kind=compute event=compute-start"));
}

TEST_CASE("every kernel matches the sequential oracle in every mode") {
	for(const auto k : {kernel_kind::stencil3, kernel_kind::jacobi, kernel_kind::jacobi_stencil, kernel_kind::elementwise}) {
		auto s = small(k);
		s.modes = {flush_mode::latency_hiding, flush_mode::blocking, flush_mode::dag_blocking};
		s.threshold = 5;
		const auto rows = run_benchmark(s);
		CHECK(rows.size() == 9);
		for(const auto& r : rows) {
			CHECK(r.wait_pct >= 0);
			CHECK(r.wait_pct <= 1);
			CHECK(r.speedup > 0);
		}
	}
}

TEST_CASE("latency hiding never waits longer than blocking") {
	for(const auto k : {kernel_kind::stencil3, kernel_kind::jacobi, kernel_kind::jacobi_stencil, kernel_kind::elementwise}) {
		const auto rows = run_benchmark(small(k));
		for(std::size_t i = 0; i < 3; ++i) {
			CHECK(rows[i].mode == flush_mode::latency_hiding);
			CHECK(rows[i + 3].mode == flush_mode::blocking);
			CHECK(rows[i].wait_pct <= rows[i + 3].wait_pct);
		}
	}
}

TEST_CASE("elementwise kernel moves nothing") {
	auto s = small(kernel_kind::elementwise);
	s.ranks = {2, 16};
	for(const auto& r : run_benchmark(s)) {
		CHECK(r.bytes == 0);
		CHECK(r.wait_pct == 0);
	}
}

TEST_CASE("oracle mismatches are reported") {
	const kernel_result want{{scalar{std::int64_t{1}}, scalar{2.0}}, {}};
	CHECK_NOTHROW(check_against_oracle(want, want));
	const kernel_result close_enough{{scalar{std::int64_t{1}}, scalar{2.0 * (1 + 1e-13)}}, {}};
	CHECK_NOTHROW(check_against_oracle(close_enough, want));
	const kernel_result off{{scalar{std::int64_t{2}}, scalar{2.0}}, {}};
	CHECK_THROWS_AS(check_against_oracle(off, want), oracle_mismatch);
	const kernel_result far{{scalar{std::int64_t{1}}, scalar{2.0 * (1 + 1e-9)}}, {}};
	CHECK_THROWS_AS(check_against_oracle(far, want), oracle_mismatch);
}

TEST_CASE("CSV rows are stable across runs") {
	const auto s = small(kernel_kind::jacobi_stencil);
	std::vector<std::string> logs1, logs2;
	const auto a = csv_report(run_benchmark(s, &logs1));
	const auto b = csv_report(run_benchmark(s, &logs2));
	CHECK(a == b);
	CHECK(logs1 == logs2);
	CHECK(a.rfind("kernel,mode,ranks,makespan,wait_pct,speedup,comparisons,bytes\n", 0) == 0);
	CHECK(a.find("jacobi_stencil,latency_hiding,1,") != std::string::npos);
	CHECK(summary_table(run_benchmark(s)).find("speedup") != std::string::npos);
}

TEST_CASE("bad benchmark specs are rejected") {
	CHECK_THROWS_AS(parse_kernel("nbody"), std::invalid_argument);
	CHECK_THROWS_AS(parse_mode("eager"), std::invalid_argument);
	CHECK(parse_mode("lh") == flush_mode::latency_hiding);
	auto s = small(kernel_kind::stencil3);
	s.iters = 0;
	CHECK_THROWS_AS(s.validate(), std::invalid_argument);
	s = small(kernel_kind::jacobi_stencil);
	s.size = 2;
	CHECK_THROWS_AS(s.validate(), std::invalid_argument);
	s = small(kernel_kind::elementwise);
	s.ranks = {0};
	CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
