#include "lazydist/flush_engine.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>

#include <fmt/format.h>

namespace lazydist {

const char* to_string(op_kind k) {
	switch(k) {
	case op_kind::send: return "send";
	case op_kind::recv: return "recv";
	case op_kind::compute: return "compute";
	case op_kind::fill: return "fill";
	}
	return "?";
}

const char* to_string(flush_event e) {
	switch(e) {
	case flush_event::initiate: return "initiate";
	case flush_event::complete: return "complete";
	case flush_event::compute_start: return "compute-start";
	case flush_event::compute_end: return "compute-end";
	case flush_event::stall_start: return "stall-start";
	case flush_event::stall_end: return "stall-end";
	}
	return "?";
}

const char* to_string(flush_mode m) {
	switch(m) {
	case flush_mode::latency_hiding: return "latency_hiding";
	case flush_mode::blocking: return "blocking";
	case flush_mode::dag_blocking: return "dag_blocking";
	}
	return "?";
}

std::string format_log_line(const log_record& r) {
	return fmt::format("t={:.3f} rank={} op={} kind={} event={} comm_ready={} compute_ready={}", r.time, r.rank, r.op, to_string(r.kind),
	    to_string(r.event), r.comm_ready, r.compute_ready);
}

void op_log::write(std::ostream& os) const {
	for(const auto& r : m_records) {
		os << format_log_line(r) << '\n';
	}
}

std::string op_log::str() const {
	std::string out;
	for(const auto& r : m_records) {
		out += format_log_line(r);
		out += '\n';
	}
	return out;
}

void assert_invariants(const dependency_system& deps, rank_t rank, bool starting_compute, bool about_to_block) {
	deps.check_ready_completeness();
	if(starting_compute && deps.has_ready(rank, op_class::communication)) {
		throw invariant_violation(fmt::format("rank {} starts a computation while communication is ready", rank));
	}
	if(about_to_block && deps.has_ready(rank, op_class::computation)) {
		throw invariant_violation(fmt::format("rank {} blocks on communication while computation is ready", rank));
	}
}

namespace {

constexpr double never = std::numeric_limits<double>::infinity();

struct inflight_op {
	handle_id handle;
	op_id op;
};

struct rank_state {
	std::vector<inflight_op> inflight;
	bool stalled = false;
	std::deque<op_id> order; ///< blocking mode: remaining operations in recording order
};

class flush_driver {
  public:
	flush_driver(dependency_system& deps, transport& net, op_executor& exec, const flush_options& opts)
	    : m_deps(deps), m_net(net), m_exec(exec), m_opts(opts), m_ranks(static_cast<std::size_t>(net.nprocs())) {}

	void run() {
		if(m_opts.mode == flush_mode::blocking) {
			for(const auto id : m_exec.recording_order()) {
				m_ranks.at(static_cast<std::size_t>(m_exec.rank_of(id))).order.push_back(id);
			}
		}
		while(!m_deps.empty()) {
			rank_t best = -1;
			double best_time = never;
			for(rank_t r = 0; r < m_net.nprocs(); ++r) {
				const auto t = next_time(r);
				if(t < best_time) {
					best_time = t;
					best = r;
				}
			}
			if(best < 0) throw deadlock_error(deadlock_report());
			if(m_opts.mode == flush_mode::blocking) {
				step_blocking(best);
			} else {
				step_latency_hiding(best);
			}
		}
		finish_flush(m_net);
	}

	static void finish_flush(transport& net) {
		const auto end = net.makespan();
		for(rank_t r = 0; r < net.nprocs(); ++r) {
			net.advance_idle(r, end);
		}
		if(!net.quiescent()) throw invariant_violation("transfers remain unconsumed at the end of a flush");
	}

  private:
	std::vector<handle_id> handles(const rank_state& st) const {
		std::vector<handle_id> hs;
		hs.reserve(st.inflight.size());
		for(const auto& f : st.inflight) {
			hs.push_back(f.handle);
		}
		return hs;
	}

	double next_time(rank_t r) const {
		const auto& st = m_ranks[static_cast<std::size_t>(r)];
		const auto now = m_net.clock(r);
		if(m_opts.mode == flush_mode::latency_hiding) {
			if(m_deps.has_ready(r, op_class::communication) || m_deps.has_ready(r, op_class::computation)) return now;
		} else if(st.inflight.empty()) {
			return st.order.empty() ? never : now;
		}
		if(st.inflight.empty()) return never;
		const auto hs = handles(st);
		const auto earliest = m_net.earliest_completion(hs);
		if(!earliest) return never;
		return std::max(now, *earliest);
	}

	void log(rank_t r, op_id id, op_kind kind, flush_event ev) {
		if(m_opts.log == nullptr) return;
		m_opts.log->add(log_record{m_net.clock(r), r, id, kind, ev, m_deps.ready_count(r, op_class::communication),
		    m_deps.ready_count(r, op_class::computation)});
	}

	void initiate(rank_t r, op_id id) {
		const auto kind = m_exec.kind_of(id);
		handle_id h;
		if(kind == op_kind::send) {
			auto req = m_exec.make_send(id);
			h = m_net.post_send(r, req.dst, std::move(req.tag), std::move(req.payload));
		} else {
			auto req = m_exec.make_recv(id);
			h = m_net.post_recv(r, req.src, std::move(req.tag));
		}
		m_ranks[static_cast<std::size_t>(r)].inflight.push_back({h, id});
		log(r, id, kind, flush_event::initiate);
	}

	void complete(rank_t r, const inflight_op& f) {
		auto payload = m_net.consume(f.handle);
		const auto kind = m_exec.kind_of(f.op);
		if(kind == op_kind::recv) m_exec.deliver(f.op, payload);
		m_deps.retire(f.op);
		log(r, f.op, kind, flush_event::complete);
	}

	/// Retires every transfer of `r` that has completed by its current clock, earliest first.
	void poll(rank_t r) {
		auto& st = m_ranks[static_cast<std::size_t>(r)];
		std::vector<inflight_op> done, pending;
		for(const auto& f : st.inflight) {
			(m_net.is_complete(f.handle) ? done : pending).push_back(f);
		}
		if(done.empty()) return;
		std::sort(done.begin(), done.end(), [&](const inflight_op& a, const inflight_op& b) {
			const auto ta = *m_net.completion_time(a.handle), tb = *m_net.completion_time(b.handle);
			return ta != tb ? ta < tb : a.op < b.op;
		});
		st.inflight = std::move(pending);
		for(const auto& f : done) {
			complete(r, f);
		}
	}

	void run_compute(rank_t r, op_id id) {
		const auto kind = m_exec.kind_of(id);
		log(r, id, kind, flush_event::compute_start);
		const auto elements = m_exec.compute(id);
		m_net.advance_compute(r, static_cast<double>(elements) * m_net.model().compute_cost);
		m_deps.retire(id);
		log(r, id, kind, flush_event::compute_end);
	}

	void end_stall(rank_t r) {
		auto& st = m_ranks[static_cast<std::size_t>(r)];
		if(!st.stalled) return;
		const auto hs = handles(st);
		m_net.wait_any(r, hs);
		st.stalled = false;
		log(r, 0, op_kind::recv, flush_event::stall_end);
	}

	void step_latency_hiding(rank_t r) {
		auto& st = m_ranks[static_cast<std::size_t>(r)];
		end_stall(r);
		while(m_deps.has_ready(r, op_class::communication)) {
			initiate(r, m_deps.take_ready(r, op_class::communication));
		}
		poll(r);
		if(m_deps.has_ready(r, op_class::communication)) return;
		if(m_deps.has_ready(r, op_class::computation)) {
			if(m_opts.check_invariants) assert_invariants(m_deps, r, true, false);
			run_compute(r, m_deps.take_ready(r, op_class::computation));
			return;
		}
		if(!st.inflight.empty()) {
			if(m_opts.check_invariants) assert_invariants(m_deps, r, false, true);
			st.stalled = true;
			log(r, 0, op_kind::recv, flush_event::stall_start);
		}
	}

	void step_blocking(rank_t r) {
		auto& st = m_ranks[static_cast<std::size_t>(r)];
		if(!st.inflight.empty()) {
			st.stalled = true;
			end_stall(r);
			poll(r);
			return;
		}
		const auto id = st.order.front();
		st.order.pop_front();
		m_deps.take(id);
		if(class_of(m_exec.kind_of(id)) == op_class::computation) {
			run_compute(r, id);
			return;
		}
		initiate(r, id);
		poll(r);
		if(!st.inflight.empty()) log(r, 0, op_kind::recv, flush_event::stall_start);
	}

	std::string deadlock_report() const {
		std::string out = fmt::format("deadlock: {} operation(s) remain and no rank can progress;", m_deps.live_count());
		for(rank_t r = 0; r < m_net.nprocs(); ++r) {
			const auto& st = m_ranks[static_cast<std::size_t>(r)];
			if(st.inflight.empty()) continue;
			out += fmt::format(" rank {} waits on ops", r);
			for(const auto& f : st.inflight) {
				out += fmt::format(" {}", f.op);
			}
			out += ";";
		}
		return out;
	}

	dependency_system& m_deps;
	transport& m_net;
	op_executor& m_exec;
	flush_options m_opts;
	std::vector<rank_state> m_ranks;
};

} // namespace

void flush(dependency_system& deps, transport& net, op_executor& exec, const flush_options& opts) {
	if(opts.mode == flush_mode::dag_blocking) throw std::invalid_argument("dag_blocking flushes run through dag_schedule_blocking");
	flush_driver(deps, net, exec, opts).run();
}

bsp_result naive_bsp_flush(dependency_system& deps, transport& net, op_executor& exec) {
	bsp_result result;
	const auto ranks = net.nprocs();
	while(!deps.empty()) {
		++result.generations;
		std::vector<op_id> generation;
		for(rank_t r = 0; r < ranks; ++r) {
			for(const auto cls : {op_class::communication, op_class::computation}) {
				while(deps.has_ready(r, cls)) {
					generation.push_back(deps.take_ready(r, cls));
				}
			}
		}
		if(generation.empty()) {
			result.report = fmt::format("generation {}: no operation is ready", result.generations);
			return result;
		}
		std::vector<std::pair<handle_id, op_id>> comms;
		for(const auto id : generation) {
			const auto r = exec.rank_of(id);
			const auto kind = exec.kind_of(id);
			if(kind == op_kind::send) {
				auto req = exec.make_send(id);
				comms.emplace_back(net.post_send(r, req.dst, std::move(req.tag), std::move(req.payload)), id);
			} else if(kind == op_kind::recv) {
				auto req = exec.make_recv(id);
				comms.emplace_back(net.post_recv(r, req.src, std::move(req.tag)), id);
			} else {
				net.advance_compute(r, static_cast<double>(exec.compute(id)) * net.model().compute_cost);
			}
		}
		// Every rank now blocks until all of its communication in this generation has finished.
		for(const auto& [h, id] : comms) {
			if(!net.completion_time(h)) result.blocked.push_back(id);
		}
		if(!result.blocked.empty()) {
			result.report = fmt::format("deadlock in generation {}: {} receive(s) wait for sends that are not ready until a later generation",
			    result.generations, result.blocked.size());
			return result;
		}
		for(const auto& [h, id] : comms) {
			const auto r = exec.rank_of(id);
			const handle_id one[] = {h};
			net.wait_any(r, one);
			auto payload = net.consume(h);
			if(exec.kind_of(id) == op_kind::recv) exec.deliver(id, payload);
		}
		for(const auto id : generation) {
			deps.retire(id);
		}
	}
	const auto end = net.makespan();
	for(rank_t r = 0; r < ranks; ++r) {
		net.advance_idle(r, end);
	}
	result.completed = true;
	return result;
}

} // namespace lazydist
