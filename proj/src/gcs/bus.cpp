#include "cinedrone/gcs/bus.hpp"

#include <algorithm>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::gcs {

LoopbackBus::LoopbackBus(bool fuzz, std::uint64_t fuzz_seed) : fuzz_(fuzz), rng_(fuzz_seed) {}

void LoopbackBus::connect(const std::string& name) { endpoints_.try_emplace(name); }

WireMessage LoopbackBus::publish(const std::string& sender, MsgType type, Json payload, std::vector<std::string> to) {
  WireMessage m;
  m.type = type;
  m.seq = ++seq_[sender];
  m.sender = sender;
  m.to = std::move(to);
  m.payload = std::move(payload);
  validate_payload(m.type, m.payload);
  const std::string line = encode(m);
  for (auto& [name, ep] : endpoints_) {
    if (name == sender) continue;
    if (!m.to.empty() && std::find(m.to.begin(), m.to.end(), name) == m.to.end()) continue;
    ep.in_flight.push_back({sender, ++ep.sent[sender], line, false});
  }
  if (observer_) observer_(m);
  return m;
}

std::size_t LoopbackBus::pending(const std::string& name, const std::string& from) const {
  auto it = endpoints_.find(name);
  if (it == endpoints_.end()) return 0;
  std::size_t n = 0;
  for (const auto& f : it->second.in_flight) n += from.empty() || f.sender == from;
  for (const auto& [sender, held] : it->second.held) n += from.empty() || sender == from ? held.size() : 0;
  return n;
}

std::vector<WireMessage> LoopbackBus::poll(const std::string& name) {
  auto it = endpoints_.find(name);
  if (it == endpoints_.end()) throw Error("bus endpoint " + name + " is not connected");
  Endpoint& ep = it->second;

  std::vector<InFlight> arrived;
  std::deque<InFlight> later;
  std::bernoulli_distribution defer(0.25);
  for (auto& f : ep.in_flight) {
    if (fuzz_ && !f.deferred && defer(rng_)) {
      f.deferred = true;
      later.push_back(std::move(f));
    } else {
      arrived.push_back(std::move(f));
    }
  }
  ep.in_flight = std::move(later);
  if (fuzz_) {
    for (std::size_t start = 0; start < arrived.size(); start += 3) {
      const std::size_t end = std::min(arrived.size(), start + 3);
      std::shuffle(arrived.begin() + static_cast<std::ptrdiff_t>(start),
                   arrived.begin() + static_cast<std::ptrdiff_t>(end), rng_);
    }
  }

  std::vector<WireMessage> ready;
  for (const auto& f : arrived) {
    auto& held = ep.held[f.sender];
    held.emplace(f.link_seq, decode(f.line));
    std::uint64_t& next = ep.next_seq.try_emplace(f.sender, 1).first->second;
    for (auto h = held.find(next); h != held.end(); h = held.find(next)) {
      ready.push_back(std::move(h->second));
      held.erase(h);
      ++next;
    }
  }
  return ready;
}

}  // namespace cinedrone::gcs
