#include "cinedrone/gcs/net.hpp"

#include <istream>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::gcs {

namespace asio = boost::asio;
using asio::ip::tcp;

std::pair<std::string, unsigned short> parse_listen_address(const std::string& address) {
  std::string host = "127.0.0.1";
  std::string port = address;
  if (const auto colon = address.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = address.substr(0, colon);
    port = address.substr(colon + 1);
  }
  try {
    std::size_t used = 0;
    const long p = std::stol(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range("port");
    return {host, static_cast<unsigned short>(p)};
  } catch (const std::exception&) {
    throw Error("bad listen address '" + address + "', expected host:port");
  }
}

struct NdjsonServer::Client {
  explicit Client(tcp::socket s) : socket(std::move(s)) {}
  tcp::socket socket;
  asio::streambuf in;
  std::deque<std::string> out;
  bool writing = false;
};

NdjsonServer::NdjsonServer(const std::string& address) : guard_(asio::make_work_guard(io_)), acceptor_(io_) {
  const auto [host, port] = parse_listen_address(address);
  boost::system::error_code ec;
  const auto ip = asio::ip::make_address(host, ec);
  if (ec) throw Error("bad listen host '" + host + "': " + ec.message());
  const tcp::endpoint ep(ip, port);
  acceptor_.open(ep.protocol());
  acceptor_.set_option(tcp::acceptor::reuse_address(true));
  acceptor_.bind(ep, ec);
  if (ec) throw Error("cannot listen on " + address + ": " + ec.message());
  acceptor_.listen();
  port_ = acceptor_.local_endpoint().port();
  accept();
  thread_ = std::thread([this] { io_.run(); });
}

NdjsonServer::~NdjsonServer() {
  asio::post(io_, [this] {
    boost::system::error_code ec;
    acceptor_.close(ec);
    for (const auto& c : clients_) c->socket.close(ec);
    clients_.clear();
    clients_count_ = 0;
  });
  guard_.reset();
  if (thread_.joinable()) thread_.join();
}

void NdjsonServer::accept() {
  acceptor_.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
    if (ec) return;
    auto c = std::make_shared<Client>(std::move(socket));
    clients_.insert(c);
    clients_count_ = clients_.size();
    read(c);
    accept();
  });
}

void NdjsonServer::read(const std::shared_ptr<Client>& c) {
  asio::async_read_until(c->socket, c->in, '\n', [this, c](boost::system::error_code ec, std::size_t) {
    if (ec) {
      drop(c);
      return;
    }
    std::istream is(&c->in);
    std::string line;
    std::getline(is, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) accept_line(line);
    read(c);
  });
}

void NdjsonServer::accept_line(const std::string& line) {
  try {
    WireMessage m = decode(line);
    if (m.type != MsgType::DASH_CMD) throw Error("only DASH_CMD is accepted from clients");
    std::lock_guard lock(mu_);
    auto [it, fresh] = last_seq_.try_emplace(m.sender, 0);
    if (!fresh && m.seq <= it->second) throw Error("non-increasing seq from " + m.sender);
    it->second = m.seq;
    commands_.push_back(std::move(m));
  } catch (const Error&) {
    ++rejected_;
  }
}

void NdjsonServer::write(const std::shared_ptr<Client>& c) {
  if (c->writing || c->out.empty()) return;
  c->writing = true;
  asio::async_write(c->socket, asio::buffer(c->out.front()), [this, c](boost::system::error_code ec, std::size_t) {
    c->writing = false;
    if (ec) {
      drop(c);
      return;
    }
    c->out.pop_front();
    write(c);
  });
}

void NdjsonServer::drop(const std::shared_ptr<Client>& c) {
  boost::system::error_code ec;
  c->socket.close(ec);
  clients_.erase(c);
  clients_count_ = clients_.size();
}

void NdjsonServer::broadcast(const std::string& line) {
  asio::post(io_, [this, data = line + "\n"] {
    for (const auto& c : clients_) {
      c->out.push_back(data);
      write(c);
    }
  });
}

std::vector<WireMessage> NdjsonServer::drain_commands() {
  std::lock_guard lock(mu_);
  std::vector<WireMessage> out;
  out.swap(commands_);
  return out;
}

}  // namespace cinedrone::gcs
