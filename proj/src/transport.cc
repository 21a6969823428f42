#include "lazydist/transport.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace lazydist {

transport::transport(int nprocs, latency_model model) : m_model(model) {
	if(nprocs < 1) throw std::invalid_argument("transport needs at least one rank");
	if(model.alpha < 0) throw std::invalid_argument("alpha must be >= 0");
	if(!(model.beta > 0)) throw std::invalid_argument("beta must be > 0");
	if(model.compute_cost < 0) throw std::invalid_argument("compute cost must be >= 0");
	m_clock.assign(static_cast<std::size_t>(nprocs), 0.0);
	m_wait = m_compute = m_idle = m_clock;
}

void transport::check_rank(rank_t r) const {
	if(r < 0 || r >= nprocs()) throw std::invalid_argument(fmt::format("rank {} out of range", r));
}

const transport::handle_rec& transport::rec(handle_id h) const {
	if(h >= m_handles.size()) throw std::invalid_argument(fmt::format("unknown handle {}", h));
	return m_handles[h];
}

handle_id transport::post_send(rank_t src, rank_t dst, message_tag tag, std::vector<std::byte> payload) {
	check_rank(src);
	check_rank(dst);
	const auto now = m_clock[src];
	auto start = now;
	const auto size = static_cast<double>(payload.size());
	const auto transfer_time = std::isinf(m_model.beta) ? 0.0 : size / m_model.beta;
	if(m_model.serialize_links) {
		auto& free = m_link_free[{src, dst}];
		start = std::max(start, free);
		free = start + m_model.alpha + transfer_time;
	}
	const auto arrival = start + m_model.alpha + transfer_time;

	const handle_id h = m_handles.size();
	m_stats.messages += 1;
	m_stats.bytes += payload.size();
	m_handles.push_back(handle_rec{src, true, arrival, handle_state::in_flight, std::move(payload), std::nullopt, now});

	const match_key key{src, dst, tag.transfer};
	if(m_unmatched_sends.count(key) != 0) throw match_ambiguity_error(fmt::format("duplicate send for transfer {}", tag.transfer));
	if(const auto it = m_unmatched_recvs.find(key); it != m_unmatched_recvs.end()) {
		auto& r = m_handles[it->second];
		r.peer = h;
		r.completion = std::max(arrival, r.post_time);
		r.payload = std::move(m_handles[h].payload);
		m_handles[h].peer = it->second;
		m_unmatched_recvs.erase(it);
	} else {
		m_unmatched_sends.emplace(key, h);
	}
	return h;
}

handle_id transport::post_recv(rank_t dst, rank_t src, message_tag tag) {
	check_rank(src);
	check_rank(dst);
	const match_key key{src, dst, tag.transfer};
	if(m_unmatched_recvs.count(key) != 0) {
		throw match_ambiguity_error(fmt::format("two receives match transfer {} from rank {} to rank {}", tag.transfer, src, dst));
	}
	const auto now = m_clock[dst];
	const handle_id h = m_handles.size();
	m_handles.push_back(handle_rec{dst, false, std::nullopt, handle_state::in_flight, {}, std::nullopt, now});
	if(const auto it = m_unmatched_sends.find(key); it != m_unmatched_sends.end()) {
		auto& s = m_handles[it->second];
		auto& r = m_handles[h];
		r.peer = it->second;
		s.peer = h;
		r.completion = std::max(*s.completion, now);
		r.payload = std::move(s.payload);
		m_unmatched_sends.erase(it);
	} else {
		m_unmatched_recvs.emplace(key, h);
	}
	return h;
}

std::optional<double> transport::completion_time(handle_id h) const { return rec(h).completion; }

rank_t transport::owner(handle_id h) const { return rec(h).owner; }

bool transport::is_complete(handle_id h) const {
	const auto& r = rec(h);
	return r.state != handle_state::in_flight || (r.completion && *r.completion <= m_clock[r.owner]);
}

handle_state transport::state(handle_id h) const {
	const auto& r = rec(h);
	if(r.state == handle_state::consumed) return handle_state::consumed;
	return is_complete(h) ? handle_state::complete : handle_state::in_flight;
}

std::vector<handle_id> transport::test_complete(std::span<const handle_id> handles) const {
	std::vector<handle_id> done;
	for(const auto h : handles) {
		if(is_complete(h)) done.push_back(h);
	}
	return done;
}

std::optional<double> transport::earliest_completion(std::span<const handle_id> handles) const {
	std::optional<double> best;
	for(const auto h : handles) {
		const auto& c = rec(h).completion;
		if(c && (!best || *c < *best)) best = c;
	}
	return best;
}

handle_id transport::wait_any(rank_t rank, std::span<const handle_id> handles) {
	check_rank(rank);
	std::optional<handle_id> best;
	for(const auto h : handles) {
		const auto& c = rec(h).completion;
		if(c && (!best || *c < *rec(*best).completion)) best = h;
	}
	if(!best) throw deadlock_error(fmt::format("rank {} waits on {} handle(s) none of which can complete", rank, handles.size()));
	const auto t = *rec(*best).completion;
	if(t > m_clock[rank]) {
		m_wait[rank] += t - m_clock[rank];
		m_clock[rank] = t;
	}
	return *best;
}

void transport::advance_compute(rank_t rank, double cost) {
	check_rank(rank);
	m_clock[rank] += cost;
	m_compute[rank] += cost;
}

void transport::advance_idle(rank_t rank, double to) {
	check_rank(rank);
	if(to > m_clock[rank]) {
		m_idle[rank] += to - m_clock[rank];
		m_clock[rank] = to;
	}
}

std::vector<std::byte> transport::consume(handle_id h) {
	if(!is_complete(h)) throw invariant_violation(fmt::format("consuming incomplete handle {}", h));
	auto& r = m_handles[h];
	if(r.state == handle_state::consumed) throw invariant_violation(fmt::format("handle {} consumed twice", h));
	r.state = handle_state::consumed;
	// A completed send may still be unmatched; its payload stays with it until the receive is posted.
	if(r.is_send) return {};
	return std::move(r.payload);
}

double transport::makespan() const { return *std::max_element(m_clock.begin(), m_clock.end()); }

bool transport::quiescent() const {
	if(!m_unmatched_sends.empty() || !m_unmatched_recvs.empty()) return false;
	return std::all_of(m_handles.begin(), m_handles.end(), [](const handle_rec& r) { return r.state == handle_state::consumed; });
}

} // namespace lazydist
