#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio.hpp>

#include "cinedrone/gcs/wire.hpp"

namespace cinedrone::gcs {

/// Splits "host:port", ":port" or "port" (host defaults to 127.0.0.1). Throws Error.
std::pair<std::string, unsigned short> parse_listen_address(const std::string& address);

/// TCP listener for dashboard clients speaking newline-delimited JSON. Every broadcast line
/// goes to every connected client; incoming lines must be DASH_CMD messages with strictly
/// increasing seq per sender and are queued for the session. The socket work runs on a
/// private thread.
class NdjsonServer {
 public:
  /// Port 0 picks an ephemeral port.
  explicit NdjsonServer(const std::string& address);
  ~NdjsonServer();
  NdjsonServer(const NdjsonServer&) = delete;
  NdjsonServer& operator=(const NdjsonServer&) = delete;

  unsigned short port() const { return port_; }
  std::size_t client_count() const { return clients_count_.load(); }
  std::size_t rejected() const { return rejected_.load(); }

  void broadcast(const std::string& line);
  std::vector<WireMessage> drain_commands();

 private:
  struct Client;
  void accept();
  void read(const std::shared_ptr<Client>& c);
  void write(const std::shared_ptr<Client>& c);
  void drop(const std::shared_ptr<Client>& c);
  void accept_line(const std::string& line);

  boost::asio::io_context io_;
  boost::asio::executor_work_guard<boost::asio::io_context::executor_type> guard_;
  boost::asio::ip::tcp::acceptor acceptor_;
  unsigned short port_ = 0;
  std::set<std::shared_ptr<Client>> clients_;  // io thread only
  std::atomic<std::size_t> clients_count_{0};
  std::atomic<std::size_t> rejected_{0};
  std::mutex mu_;
  std::vector<WireMessage> commands_;
  std::map<std::string, std::uint64_t> last_seq_;
  std::thread thread_;
};

}  // namespace cinedrone::gcs
