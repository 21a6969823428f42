#include "lazydist/bench.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>

#include <fmt/format.h>

namespace lazydist {

const char* to_string(kernel_kind k) {
	switch(k) {
	case kernel_kind::stencil3: return "stencil3";
	case kernel_kind::jacobi: return "jacobi";
	case kernel_kind::jacobi_stencil: return "jacobi_stencil";
	case kernel_kind::elementwise: return "elementwise";
	}
	return "?";
}

kernel_kind parse_kernel(const std::string& name) {
	for(const auto k : {kernel_kind::stencil3, kernel_kind::jacobi, kernel_kind::jacobi_stencil, kernel_kind::elementwise}) {
		if(name == to_string(k)) return k;
	}
	throw std::invalid_argument(fmt::format("unknown kernel '{}'", name));
}

flush_mode parse_mode(const std::string& name) {
	if(name == "lh" || name == "latency_hiding") return flush_mode::latency_hiding;
	if(name == "blocking") return flush_mode::blocking;
	if(name == "dag" || name == "dag_blocking") return flush_mode::dag_blocking;
	throw std::invalid_argument(fmt::format("unknown mode '{}'", name));
}

void benchmark_spec::validate() const {
	const index_t min_size = kernel == kernel_kind::stencil3 || kernel == kernel_kind::jacobi_stencil ? 3 : 1;
	if(size < min_size) throw std::invalid_argument(fmt::format("{} needs size >= {}", to_string(kernel), min_size));
	if(block < 1) throw std::invalid_argument("block size must be >= 1");
	if(iters < 1) throw std::invalid_argument("iterations must be >= 1");
	if(ranks.empty()) throw std::invalid_argument("no rank counts given");
	for(const auto r : ranks) {
		if(r < 1) throw std::invalid_argument("rank counts must be >= 1");
	}
	if(modes.empty()) throw std::invalid_argument("no modes given");
}

namespace {

class unit_rng {
  public:
	explicit unit_rng(std::uint64_t seed) : m_gen(seed) {}
	/// Uniform in [0, 1), identical on every platform.
	double next() { return static_cast<double>(m_gen() >> 11) * 0x1.0p-53; }

  private:
	std::mt19937_64 m_gen;
};

region box(std::initializer_list<std::pair<index_t, index_t>> ranges) {
	region r;
	for(const auto& [start, count] : ranges) {
		r.push_back(make_slice(start, count, 1));
	}
	return r;
}

/// Plain row-major arrays; every operation evaluates all inputs before assigning the output.
class sequential_backend {
  public:
	struct handle {
		std::shared_ptr<std::vector<std::uint64_t>> data;
		coords shape;
		dtype type = dtype::f64;
		region sel;
	};
	using arg = std::variant<handle, scalar>;

	handle create(const coords& shape, const coords& /* block */, dtype type, const std::vector<scalar>& values = {}) {
		const auto n = static_cast<std::size_t>(product(shape));
		auto data = std::make_shared<std::vector<std::uint64_t>>(n, 0);
		for(std::size_t i = 0; i < values.size(); ++i) {
			(*data)[i] = word_of(values[i], type);
		}
		region all;
		for(const auto e : shape) {
			all.push_back(make_slice(0, e, 1));
		}
		return handle{std::move(data), shape, type, std::move(all)};
	}

	handle view(const handle& a, const region& sel) { return handle{a.data, a.shape, a.type, sel}; }

	void apply(const ufunc_ptr& f, const handle& out, const std::vector<arg>& ins) {
		const auto n = static_cast<std::size_t>(region_size(out.sel));
		std::vector<std::vector<std::uint64_t>> cols;
		for(const auto& in : ins) {
			std::vector<std::uint64_t> col;
			if(const auto* s = std::get_if<scalar>(&in)) {
				col.assign(n, word_of(*s, out.type));
			} else {
				col = gather(std::get<handle>(in));
			}
			cols.push_back(std::move(col));
		}
		std::vector<std::uint64_t> result(n);
		for(std::size_t i = 0; i < n; ++i) {
			if(out.type == dtype::f64) {
				std::vector<double> args;
				for(const auto& c : cols) {
					args.push_back(std::bit_cast<double>(c[i]));
				}
				result[i] = std::bit_cast<std::uint64_t>(f->f64(args));
			} else {
				std::vector<std::int64_t> args;
				for(const auto& c : cols) {
					args.push_back(static_cast<std::int64_t>(c[i]));
				}
				result[i] = static_cast<std::uint64_t>(f->i64(args));
			}
		}
		std::size_t i = 0;
		for_each_offset(out.shape, out.sel, [&](index_t off) { (*out.data)[static_cast<std::size_t>(off)] = result[i++]; });
	}

	std::vector<scalar> read(const handle& a) {
		std::vector<scalar> out;
		for(const auto w : gather(a)) {
			if(a.type == dtype::f64) {
				out.emplace_back(std::bit_cast<double>(w));
			} else {
				out.emplace_back(static_cast<std::int64_t>(w));
			}
		}
		return out;
	}

  private:
	static std::uint64_t word_of(const scalar& s, dtype t) {
		if(t == dtype::f64) {
			return std::bit_cast<std::uint64_t>(std::holds_alternative<double>(s) ? std::get<double>(s) : static_cast<double>(std::get<std::int64_t>(s)));
		}
		return static_cast<std::uint64_t>(std::get<std::int64_t>(s));
	}

	static std::vector<std::uint64_t> gather(const handle& a) {
		std::vector<std::uint64_t> out;
		for_each_offset(a.shape, a.sel, [&](index_t off) { out.push_back((*a.data)[static_cast<std::size_t>(off)]); });
		return out;
	}
};

class distributed_backend {
  public:
	using handle = array_view;
	using arg = std::variant<handle, scalar>;

	explicit distributed_backend(runtime& rt) : m_rt(rt) {}

	handle create(const coords& shape, const coords& block, dtype type, const std::vector<scalar>& values = {}) {
		return m_rt.create_array(shape, block, type, values);
	}

	handle view(const handle& a, const region& sel) { return slice_view(a, sel); }

	void apply(const ufunc_ptr& f, const handle& out, const std::vector<arg>& ins) {
		std::vector<operand> ops;
		for(const auto& in : ins) {
			if(const auto* s = std::get_if<scalar>(&in)) {
				ops.emplace_back(*s);
			} else {
				ops.emplace_back(std::get<handle>(in));
			}
		}
		m_rt.record_ufunc(f, out, ops);
	}

	std::vector<scalar> read(const handle& a) { return m_rt.read_elements(a); }

  private:
	runtime& m_rt;
};

double sum_f64(const std::vector<scalar>& v) {
	double s = 0;
	for(const auto& x : v) {
		s += std::get<double>(x);
	}
	return s;
}

template <typename B>
kernel_result stencil3(B& b, const benchmark_spec& spec) {
	const auto n = spec.size;
	std::vector<scalar> init;
	for(index_t i = 0; i < n; ++i) {
		init.emplace_back(std::int64_t{i + 1});
	}
	auto m = b.create({n}, {spec.block}, dtype::i64, init);
	auto nn = b.create({n}, {spec.block}, dtype::i64);
	for(int it = 0; it < spec.iters; ++it) {
		b.apply(ufuncs::add(), b.view(nn, box({{1, n - 2}})), {b.view(m, box({{2, n - 2}})), b.view(m, box({{0, n - 2}}))});
		std::swap(m, nn);
	}
	return {b.read(m), {}};
}

template <typename B>
kernel_result jacobi_stencil(B& b, const benchmark_spec& spec) {
	const auto n = spec.size;
	const auto inner = n - 2;
	unit_rng rng(spec.seed);
	std::vector<scalar> init;
	for(index_t i = 0; i < n * n; ++i) {
		init.emplace_back(rng.next());
	}
	const coords bs{spec.block, spec.block};
	auto full = b.create({n, n}, bs, dtype::f64, init);
	auto work = b.create({inner, inner}, bs, dtype::f64);
	auto tmp = b.create({inner, inner}, bs, dtype::f64);
	auto diff = b.create({inner, inner}, bs, dtype::f64);
	const auto cells = b.view(full, box({{1, inner}, {1, inner}}));
	const auto up = b.view(full, box({{0, inner}, {1, inner}}));
	const auto down = b.view(full, box({{2, inner}, {1, inner}}));
	const auto left = b.view(full, box({{1, inner}, {0, inner}}));
	const auto right = b.view(full, box({{1, inner}, {2, inner}}));

	kernel_result result;
	for(int it = 0; it < spec.iters; ++it) {
		b.apply(ufuncs::identity(), work, {cells});
		b.apply(ufuncs::add(), tmp, {up, down});
		b.apply(ufuncs::add(), tmp, {tmp, left});
		b.apply(ufuncs::add(), tmp, {tmp, right});
		b.apply(ufuncs::multiply(), tmp, {tmp, scalar{0.2}});
		b.apply(ufuncs::add(), work, {work, tmp});
		b.apply(ufuncs::subtract(), diff, {cells, work});
		b.apply(ufuncs::absolute(), diff, {diff});
		result.residuals.push_back(sum_f64(b.read(diff)));
		b.apply(ufuncs::identity(), cells, {work});
	}
	result.values = b.read(full);
	return result;
}

template <typename B>
kernel_result jacobi(B& b, const benchmark_spec& spec) {
	const auto n = spec.size;
	unit_rng rng(spec.seed);
	std::vector<scalar> a_init, b_init, d_init;
	for(index_t i = 0; i < n; ++i) {
		for(index_t j = 0; j < n; ++j) {
			const auto v = i == j ? static_cast<double>(n) + rng.next() : rng.next();
			a_init.emplace_back(v);
			if(i == j) d_init.emplace_back(v);
		}
	}
	for(index_t i = 0; i < n; ++i) {
		b_init.emplace_back(rng.next());
	}
	const coords vec_block{spec.block, 1};
	auto a = b.create({n, n}, {spec.block, n}, dtype::f64, a_init);
	auto rhs = b.create({n, 1}, vec_block, dtype::f64, b_init);
	auto diag = b.create({n, 1}, vec_block, dtype::f64, d_init);
	auto x = b.create({n, 1}, vec_block, dtype::f64);
	auto s = b.create({n, 1}, vec_block, dtype::f64);
	auto t = b.create({n, 1}, vec_block, dtype::f64);

	kernel_result result;
	for(int it = 0; it < spec.iters; ++it) {
		const auto xs = b.read(x);
		for(index_t j = 0; j < n; ++j) {
			const auto col = b.view(a, box({{0, n}, {j, 1}}));
			b.apply(ufuncs::multiply(), j == 0 ? s : t, {col, xs[static_cast<std::size_t>(j)]});
			if(j > 0) b.apply(ufuncs::add(), s, {s, t});
		}
		b.apply(ufuncs::subtract(), t, {rhs, s});
		b.apply(ufuncs::divide(), t, {t, diag});
		b.apply(ufuncs::add(), x, {x, t});
	}
	result.values = b.read(x);
	return result;
}

template <typename B>
kernel_result elementwise(B& b, const benchmark_spec& spec) {
	const auto n = spec.size;
	unit_rng rng(spec.seed);
	std::vector<scalar> a_init, b_init;
	for(index_t i = 0; i < n * n; ++i) {
		a_init.emplace_back(2 * rng.next() - 1);
		b_init.emplace_back(1 + rng.next());
	}
	const coords bs{spec.block, spec.block};
	auto a = b.create({n, n}, bs, dtype::f64, a_init);
	auto bb = b.create({n, n}, bs, dtype::f64, b_init);
	auto c = b.create({n, n}, bs, dtype::f64);
	for(int it = 0; it < spec.iters; ++it) {
		b.apply(ufuncs::multiply(), c, {a, bb});
		b.apply(ufuncs::subtract(), c, {c, a});
		b.apply(ufuncs::divide(), a, {c, bb});
	}
	return {b.read(a), {}};
}

template <typename B>
kernel_result run_kernel(B& b, const benchmark_spec& spec) {
	switch(spec.kernel) {
	case kernel_kind::stencil3: return stencil3(b, spec);
	case kernel_kind::jacobi: return jacobi(b, spec);
	case kernel_kind::jacobi_stencil: return jacobi_stencil(b, spec);
	case kernel_kind::elementwise: return elementwise(b, spec);
	}
	throw std::invalid_argument("unknown kernel");
}

bool close(double a, double b) {
	if(std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b)) return true;
	if(std::isnan(a) && std::isnan(b)) return true;
	return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b));
}

bool same(const scalar& a, const scalar& b) {
	if(a.index() != b.index()) return false;
	if(std::holds_alternative<std::int64_t>(a)) return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
	return close(std::get<double>(a), std::get<double>(b));
}

std::string show(const scalar& s) {
	return std::holds_alternative<std::int64_t>(s) ? fmt::format("{}", std::get<std::int64_t>(s)) : fmt::format("{:.17g}", std::get<double>(s));
}

} // namespace

kernel_result sequential_oracle(const benchmark_spec& spec) {
	spec.validate();
	sequential_backend b;
	return run_kernel(b, spec);
}

run_output run_distributed(const benchmark_spec& spec, int ranks, flush_mode mode, bool keep_log, bool check_invariants) {
	spec.validate();
	runtime_config cfg;
	cfg.nprocs = ranks;
	cfg.model = spec.model;
	cfg.mode = mode;
	cfg.flush_threshold = spec.threshold;
	cfg.check_invariants = check_invariants;
	cfg.log_enabled = keep_log;
	runtime rt(cfg);
	distributed_backend b(rt);
	run_output out;
	out.result = run_kernel(b, spec);
	rt.finalize();
	out.metrics = rt.metrics();
	if(keep_log) out.log = rt.log().str();
	return out;
}

void check_against_oracle(const kernel_result& got, const kernel_result& want) {
	std::string report;
	int shown = 0;
	std::size_t bad = 0;
	if(got.values.size() != want.values.size()) {
		throw oracle_mismatch(fmt::format("result has {} elements, oracle has {}", got.values.size(), want.values.size()));
	}
	for(std::size_t i = 0; i < got.values.size(); ++i) {
		if(same(got.values[i], want.values[i])) continue;
		++bad;
		if(shown++ < 8) report += fmt::format("\n  element {}: got {}, expected {}", i, show(got.values[i]), show(want.values[i]));
	}
	if(got.residuals.size() != want.residuals.size()) {
		report += fmt::format("\n  {} residuals read, expected {}", got.residuals.size(), want.residuals.size());
		++bad;
	} else {
		for(std::size_t i = 0; i < got.residuals.size(); ++i) {
			if(close(got.residuals[i], want.residuals[i])) continue;
			++bad;
			report += fmt::format("\n  residual {}: got {:.17g}, expected {:.17g}", i, got.residuals[i], want.residuals[i]);
		}
	}
	if(bad != 0) throw oracle_mismatch(fmt::format("{} value(s) differ from the sequential oracle:{}", bad, report));
}

std::vector<bench_row> run_benchmark(const benchmark_spec& spec, std::vector<std::string>* logs) {
	spec.validate();
	const auto oracle = sequential_oracle(spec);
	std::vector<bench_row> rows;
	for(const auto mode : spec.modes) {
		std::map<int, run_output> runs;
		for(const auto p : spec.ranks) {
			if(runs.count(p) == 0) runs.emplace(p, run_distributed(spec, p, mode, logs != nullptr));
		}
		if(runs.count(1) == 0) runs.emplace(1, run_distributed(spec, 1, mode));
		const auto base = runs.at(1).metrics.makespan;
		for(const auto p : spec.ranks) {
			const auto& run = runs.at(p);
			check_against_oracle(run.result, oracle);
			const auto& m = run.metrics;
			bench_row row;
			row.kernel = spec.kernel;
			row.mode = mode;
			row.ranks = p;
			row.makespan = m.makespan;
			row.wait_pct = m.wait_fraction();
			row.speedup = m.makespan > 0 ? base / m.makespan : 1.0;
			row.comparisons = m.comparisons;
			row.bytes = m.bytes;
			row.messages = m.messages;
			rows.push_back(row);
			if(logs != nullptr) logs->push_back(run.log);
		}
	}
	return rows;
}

std::string csv_report(const std::vector<bench_row>& rows) {
	std::string out = "kernel,mode,ranks,makespan,wait_pct,speedup,comparisons,bytes\n";
	for(const auto& r : rows) {
		out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{},{}\n", to_string(r.kernel), to_string(r.mode), r.ranks, r.makespan, r.wait_pct, r.speedup,
		    r.comparisons, r.bytes);
	}
	return out;
}

std::string summary_table(const std::vector<bench_row>& rows) {
	std::string out = fmt::format("{:<15} {:<15} {:>5} {:>16} {:>8} {:>8} {:>12} {:>12}\n", "kernel", "mode", "ranks", "makespan", "wait%", "speedup",
	    "comparisons", "bytes");
	for(const auto& r : rows) {
		out += fmt::format("{:<15} {:<15} {:>5} {:>16.3f} {:>8.2f} {:>8.3f} {:>12} {:>12}\n", to_string(r.kernel), to_string(r.mode), r.ranks, r.makespan,
		    100 * r.wait_pct, r.speedup, r.comparisons, r.bytes);
	}
	return out;
}

void emit_report(const std::vector<bench_row>& rows, const std::string& csv_path, std::ostream& summary) {
	if(!csv_path.empty()) {
		std::ofstream f(csv_path, std::ios::binary);
		if(!f) throw std::runtime_error(fmt::format("cannot write {}", csv_path));
		f << csv_report(rows);
	}
	summary << summary_table(rows);
}

namespace {

void record_swap_program(runtime& rt, array_view& z) {
	std::vector<scalar> init;
	for(std::int64_t i = 0; i < 6; ++i) {
		init.emplace_back(i * 10);
	}
	const auto x = rt.create_array({6}, {3}, dtype::i64, init);
	const auto y = rt.create_array({6}, {3}, dtype::i64);
	z = rt.create_array({6}, {3}, dtype::i64);
	rt.record_ufunc(ufuncs::add(), y, {x, scalar{std::int64_t{1}}});
	rt.record_copy(slice_view(z, box({{0, 3}})), slice_view(y, box({{3, 3}})));
	rt.record_copy(slice_view(z, box({{3, 3}})), slice_view(y, box({{0, 3}})));
}

} // namespace

deadlock_demo_result run_deadlock_demo() {
	deadlock_demo_result out;
	runtime_config cfg;
	cfg.nprocs = 2;
	{
		runtime naive(cfg);
		array_view z;
		record_swap_program(naive, z);
		out.naive = naive.naive_flush();
	}
	cfg.check_invariants = true;
	cfg.log_enabled = true;
	runtime rt(cfg);
	array_view z;
	record_swap_program(rt, z);
	rt.flush();
	out.latency_hiding_completed = rt.deps().empty();
	out.values = rt.read_i64(z);
	out.log = rt.log().str();
	return out;
}

} // namespace lazydist
