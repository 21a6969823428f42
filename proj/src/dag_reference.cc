#include "lazydist/dag_reference.h"

#include "lazydist/flush_engine.h"
#include "lazydist/transport.h"

#include <algorithm>
#include <deque>

#include <fmt/format.h>

namespace lazydist {

void dag_reference::insert(op_id id, rank_t rank, op_class cls, std::vector<access> accesses) {
	if(m_nodes.count(id) != 0) throw invariant_violation(fmt::format("operation {} inserted twice", id));
	node n{rank, cls, std::move(accesses), 0, {}};
	for(auto& [pred_id, pred] : m_nodes) {
		++m_comparisons;
		int weight = 0;
		for(const auto& a : pred.accesses) {
			for(const auto& b : n.accesses) {
				if(conflict(a, b)) ++weight;
			}
		}
		if(weight == 0) continue;
		pred.successors[id] = weight;
		n.in_degree += weight;
		m_all_edges.emplace(pred_id, id);
	}
	m_nodes.emplace(id, std::move(n));
}

std::vector<op_id> dag_reference::remove(op_id id) {
	const auto it = m_nodes.find(id);
	if(it == m_nodes.end()) throw invariant_violation(fmt::format("removing unknown operation {}", id));
	if(it->second.in_degree != 0) throw invariant_violation(fmt::format("removing operation {} with in-degree {}", id, it->second.in_degree));
	std::vector<op_id> ready;
	for(const auto& [succ, weight] : it->second.successors) {
		auto& s = m_nodes.at(succ);
		s.in_degree -= weight;
		if(s.in_degree == 0) ready.push_back(succ);
	}
	m_nodes.erase(it);
	return ready;
}

std::vector<op_id> dag_reference::live_ops() const {
	std::vector<op_id> ids;
	ids.reserve(m_nodes.size());
	for(const auto& [id, n] : m_nodes) {
		ids.push_back(id);
	}
	return ids;
}

std::string dag_reference::dump_dot() const {
	std::string out = "digraph dependencies {\n";
	for(const auto& [id, n] : m_nodes) {
		out += fmt::format("  op{} [label=\"op{} rank{} {}\"];\n", id, id, n.rank, n.cls == op_class::communication ? "comm" : "comp");
	}
	for(const auto& [id, n] : m_nodes) {
		for(const auto& [succ, weight] : n.successors) {
			out += fmt::format("  op{} -> op{};\n", id, succ);
		}
	}
	return out + "}\n";
}

void dag_schedule_blocking(dag_reference& graph, op_executor& exec, transport& net) {
	std::deque<op_id> fifo;
	for(const auto id : graph.live_ops()) {
		if(graph.in_degree(id) == 0) fifo.push_back(id);
	}
	std::deque<std::pair<handle_id, op_id>> parked;

	const auto finish = [&](handle_id h, op_id id) {
		const handle_id one[] = {h};
		net.wait_any(exec.rank_of(id), one);
		auto payload = net.consume(h);
		if(exec.kind_of(id) == op_kind::recv) exec.deliver(id, payload);
		for(const auto s : graph.remove(id)) {
			fifo.push_back(s);
		}
	};

	while(!graph.empty()) {
		if(fifo.empty()) {
			const auto it = std::find_if(parked.begin(), parked.end(), [&](const auto& p) { return net.completion_time(p.first).has_value(); });
			if(it == parked.end()) throw deadlock_error(fmt::format("dag schedule: {} node(s) remain, {} receive(s) unmatched", graph.size(), parked.size()));
			const auto [h, id] = *it;
			parked.erase(it);
			finish(h, id);
			continue;
		}
		const auto id = fifo.front();
		fifo.pop_front();
		const auto r = exec.rank_of(id);
		switch(exec.kind_of(id)) {
		case op_kind::compute:
		case op_kind::fill:
			net.advance_compute(r, static_cast<double>(exec.compute(id)) * net.model().compute_cost);
			for(const auto s : graph.remove(id)) {
				fifo.push_back(s);
			}
			break;
		case op_kind::send: {
			auto req = exec.make_send(id);
			finish(net.post_send(r, req.dst, std::move(req.tag), std::move(req.payload)), id);
			// The send may have satisfied parked receives.
			for(auto it = parked.begin(); it != parked.end();) {
				if(net.completion_time(it->first)) {
					const auto [ph, pid] = *it;
					it = parked.erase(it);
					finish(ph, pid);
				} else {
					++it;
				}
			}
			break;
		}
		case op_kind::recv: {
			auto req = exec.make_recv(id);
			const auto h = net.post_recv(r, req.src, std::move(req.tag));
			if(net.completion_time(h)) {
				finish(h, id);
			} else {
				parked.emplace_back(h, id);
			}
			break;
		}
		}
	}
	const auto end = net.makespan();
	for(rank_t r = 0; r < net.nprocs(); ++r) {
		net.advance_idle(r, end);
	}
	if(!net.quiescent()) throw invariant_violation("transfers remain unconsumed after the dag schedule");
}

} // namespace lazydist
