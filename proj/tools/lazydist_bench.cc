#include "lazydist/bench.h"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

using namespace lazydist;

namespace {

struct options {
	std::string kernel = "stencil3";
	index_t size = 64;
	index_t block = 8;
	std::vector<int> ranks{1, 2, 4};
	int iters = 3;
	std::vector<std::string> modes{"lh", "blocking"};
	double alpha = latency_model{}.alpha;
	double beta = latency_model{}.beta;
	double compute_cost = latency_model{}.compute_cost;
	bool serialize = false;
	std::size_t threshold = 512;
	std::uint64_t seed = 1;
	std::string csv;
	std::string log;
};

void add_spec_flags(CLI::App& cmd, options& o) {
	cmd.add_option("--kernel", o.kernel, "stencil3 | jacobi | jacobi_stencil | elementwise")->capture_default_str();
	cmd.add_option("--size", o.size, "problem size per dimension")->capture_default_str();
	cmd.add_option("--block", o.block, "block size per dimension")->capture_default_str();
	cmd.add_option("--ranks", o.ranks, "simulated rank counts")->delimiter(',')->capture_default_str();
	cmd.add_option("--iters", o.iters, "iterations")->capture_default_str();
	cmd.add_option("--mode", o.modes, "lh | blocking | dag")->delimiter(',')->capture_default_str();
	cmd.add_option("--alpha", o.alpha, "per-message latency")->capture_default_str();
	cmd.add_option("--beta", o.beta, "bytes per time unit")->capture_default_str();
	cmd.add_option("--compute-cost", o.compute_cost, "time per computed element")->capture_default_str();
	cmd.add_flag("--serialize-links", o.serialize, "serialize messages on each rank pair");
	cmd.add_option("--threshold", o.threshold, "delayed operations per automatic flush")->capture_default_str();
	cmd.add_option("--seed", o.seed, "input data seed")->capture_default_str();
}

benchmark_spec to_spec(const options& o) {
	benchmark_spec s;
	s.kernel = parse_kernel(o.kernel);
	s.size = o.size;
	s.block = o.block;
	s.ranks = o.ranks;
	s.iters = o.iters;
	s.modes.clear();
	for(const auto& m : o.modes) {
		s.modes.push_back(parse_mode(m));
	}
	s.model.alpha = o.alpha;
	s.model.beta = o.beta;
	s.model.compute_cost = o.compute_cost;
	s.model.serialize_links = o.serialize;
	s.threshold = o.threshold;
	s.seed = o.seed;
	s.validate();
	return s;
}

int cmd_run(const options& o) {
	const auto spec = to_spec(o);
	std::vector<std::string> logs;
	const auto rows = run_benchmark(spec, o.log.empty() ? nullptr : &logs);
	emit_report(rows, o.csv, std::cout);
	if(!o.log.empty()) {
		std::ofstream f(o.log, std::ios::binary);
		if(!f) throw std::runtime_error(fmt::format("cannot write {}", o.log));
		for(std::size_t i = 0; i < rows.size(); ++i) {
			f << fmt::format("# {} {} ranks={}\n", to_string(rows[i].kernel), to_string(rows[i].mode), rows[i].ranks) << logs[i];
		}
	}
	return 0;
}

int cmd_verify(const options& o) {
	const auto spec = to_spec(o);
	const auto oracle = sequential_oracle(spec);
	for(const auto mode : spec.modes) {
		for(const auto p : spec.ranks) {
			const auto run = run_distributed(spec, p, mode, false, mode == flush_mode::latency_hiding);
			check_against_oracle(run.result, oracle);
			std::cout << fmt::format("ok {} {} ranks={}\n", to_string(spec.kernel), to_string(mode), p);
		}
	}
	return 0;
}

int cmd_demo_deadlock(bool show_log) {
	const auto demo = run_deadlock_demo();
	std::cout << "naive generation-by-generation evaluation: " << (demo.naive.completed ? "completed" : demo.naive.report) << '\n';
	std::cout << "latency-hiding flush: " << (demo.latency_hiding_completed ? "completed" : "incomplete") << ", Z =";
	for(const auto v : demo.values) {
		std::cout << ' ' << v;
	}
	std::cout << '\n';
	if(show_log) std::cout << demo.log;
	// Success means the demonstration behaved as described: naive deadlocks, latency hiding does not.
	return !demo.naive.completed && demo.latency_hiding_completed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Lazy distributed array runtime benchmarks on a simulated machine"};
	app.require_subcommand(1);
	options o;

	auto* run = app.add_subcommand("run", "run benchmarks and report CSV rows");
	add_spec_flags(*run, o);
	run->add_option("--csv", o.csv, "write CSV rows to this file");
	run->add_option("--log", o.log, "write executed-op logs to this file");

	auto* verify = app.add_subcommand("verify", "check results against the sequential oracle");
	add_spec_flags(*verify, o);

	bool show_log = false;
	auto* demo = app.add_subcommand("demo-deadlock", "naive vs latency-hiding evaluation of a cross-rank swap");
	demo->add_flag("--log", show_log, "print the latency-hiding log");

	CLI11_PARSE(app, argc, argv);
	try {
		if(run->parsed()) return cmd_run(o);
		if(verify->parsed()) return cmd_verify(o);
		if(demo->parsed()) return cmd_demo_deadlock(show_log);
	} catch(const oracle_mismatch& e) {
		std::cerr << "oracle mismatch: " << e.what() << '\n';
		return 2;
	} catch(const invariant_violation& e) {
		std::cerr << "invariant violation: " << e.what() << '\n';
		return 3;
	} catch(const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
	return 1;
}
