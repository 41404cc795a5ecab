#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cinedrone/gcs/wire.hpp"

namespace cinedrone::gcs {

/// In-process stand-in for the radio link. Every message is serialized to its wire line and
/// parsed again on delivery. Each sender-receiver link numbers its frames, and receivers hand
/// messages out in link order per sender, holding early arrivals until the gap closes. With fuzzing enabled, messages may be deferred by
/// one poll and are shuffled within windows of three before reordering.
class LoopbackBus {
 public:
  explicit LoopbackBus(bool fuzz = false, std::uint64_t fuzz_seed = 0);

  void connect(const std::string& name);
  bool connected(const std::string& name) const { return endpoints_.count(name) != 0; }

  /// Assigns the sender's next seq and delivers to every endpoint except the sender (or to
  /// `to` only). Returns the message as sent.
  WireMessage publish(const std::string& sender, MsgType type, Json payload, std::vector<std::string> to = {});

  /// Messages ready for `name`, in per-sender seq order.
  std::vector<WireMessage> poll(const std::string& name);

  /// Messages addressed to `name` that have not been handed out yet (in flight or held),
  /// optionally only those from one sender.
  std::size_t pending(const std::string& name, const std::string& from = "") const;

  /// Called for every published message (after sequencing).
  void set_observer(std::function<void(const WireMessage&)> fn) { observer_ = std::move(fn); }

 private:
  struct InFlight {
    std::string sender;
    std::uint64_t link_seq = 0;
    std::string line;
    bool deferred = false;
  };
  struct Endpoint {
    std::deque<InFlight> in_flight;
    std::map<std::string, std::uint64_t> sent;      // link frames received from each sender so far
    std::map<std::string, std::uint64_t> next_seq;  // next link frame to hand out, per sender
    std::map<std::string, std::map<std::uint64_t, WireMessage>> held;
  };

  bool fuzz_;
  std::mt19937_64 rng_;
  std::map<std::string, Endpoint> endpoints_;
  std::map<std::string, std::uint64_t> seq_;
  std::function<void(const WireMessage&)> observer_;
};

}  // namespace cinedrone::gcs
