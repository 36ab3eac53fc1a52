#include "twinloop/gateway/server.hpp"

#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "twinloop/common/error.hpp"
#include "twinloop/gateway/gateway.hpp"
#include "twinloop/runtime/host.hpp"

namespace twinloop::gateway {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

constexpr std::size_t kMaxQueuedFrames = 10'000;

}  // namespace

class WsSession;

struct Server::Impl {
  Impl(runtime::Runtime& rt, ServerOptions opts);

  void attach(ClientId id, std::shared_ptr<WsSession> session);
  void detach(ClientId id);
  void deliver(ClientId id, const std::string& frame);
  void inbound(ClientId id, std::string frame);
  void do_accept();

  runtime::Runtime& runtime;
  ServerOptions options;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  Gateway gateway;
  runtime::Host host;
  std::thread io_thread;
  std::uint16_t bound_port = 0;
  ClientId next_id = 1;

  mutable std::mutex sessions_mutex;
  std::map<ClientId, std::shared_ptr<WsSession>> sessions;

  std::mutex state_mutex;
  std::condition_variable stopped_cv;
  bool running = false;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Server::Impl& server, ClientId id)
      : ws_(std::move(socket)), server_(server), id_(id) {}

  void run() {
    asio::dispatch(ws_.get_executor(), [self = shared_from_this()] { self->on_run(); });
  }

  void send(std::string frame) {
    asio::post(ws_.get_executor(), [self = shared_from_this(), frame = std::move(frame)]() mutable {
      if (self->closed_) return;
      if (self->queue_.size() >= kMaxQueuedFrames) return;  // slow consumer: drop
      self->queue_.push_back(std::move(frame));
      if (self->queue_.size() == 1) self->do_write();
    });
  }

  void close() {
    asio::post(ws_.get_executor(), [self = shared_from_this()] {
      if (self->closed_) return;
      self->closed_ = true;
      beast::error_code ec;
      beast::get_lowest_layer(self->ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
      beast::get_lowest_layer(self->ws_).close();
    });
  }

 private:
  void on_run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_.attach(self->id_, self);
      self->do_read();
    });
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->server_.detach(self->id_);
        return;
      }
      std::string frame = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->server_.inbound(self->id_, std::move(frame));
      self->do_read();
    });
  }

  void do_write() {
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->queue_.clear();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->do_write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  Server::Impl& server_;
  ClientId id_;
  bool closed_ = false;
};

Server::Impl::Impl(runtime::Runtime& rt, ServerOptions opts)
    : runtime(rt),
      options(std::move(opts)),
      gateway([this](ClientId id, const std::string& frame) { deliver(id, frame); }),
      host(rt, [this](std::vector<runtime::RuntimeEvent> events) { gateway.on_events(events); }) {}

void Server::Impl::attach(ClientId id, std::shared_ptr<WsSession> session) {
  {
    std::lock_guard lock(sessions_mutex);
    sessions[id] = std::move(session);
  }
  gateway.connect(id);
}

void Server::Impl::detach(ClientId id) {
  gateway.disconnect(id);
  std::lock_guard lock(sessions_mutex);
  sessions.erase(id);
}

void Server::Impl::deliver(ClientId id, const std::string& frame) {
  std::shared_ptr<WsSession> session;
  {
    std::lock_guard lock(sessions_mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) return;
    session = it->second;
  }
  session->send(frame);
}

void Server::Impl::inbound(ClientId id, std::string frame) {
  host.with_runtime([&](runtime::Runtime& rt) { gateway.on_frame(id, frame, rt); });
}

void Server::Impl::do_accept() {
  acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<WsSession>(std::move(socket), *this, next_id++)->run();
    do_accept();
  });
}

Server::Server(runtime::Runtime& runtime, ServerOptions options)
    : impl_(std::make_unique<Impl>(runtime, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& i = *impl_;
  {
    std::lock_guard lock(i.state_mutex);
    if (i.running) return;
  }
  beast::error_code ec;
  const auto address = asio::ip::make_address(i.options.address, ec);
  if (ec) throw Error(ErrorCode::kBadArguments, "bad listen address " + i.options.address);
  const tcp::endpoint endpoint{address, i.options.port};
  i.acceptor.open(endpoint.protocol(), ec);
  if (!ec) i.acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) i.acceptor.bind(endpoint, ec);
  if (!ec) i.acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    beast::error_code ignored;
    i.acceptor.close(ignored);
    throw Error(ErrorCode::kPortInUse,
                "cannot listen on " + i.options.address + ":" + std::to_string(i.options.port) + ": " + ec.message());
  }
  i.bound_port = i.acceptor.local_endpoint().port();
  {
    std::lock_guard lock(i.state_mutex);
    i.running = true;
  }
  i.do_accept();
  i.host.start();
  i.io_thread = std::thread([&i] { i.ioc.run(); });
}

void Server::stop() {
  auto& i = *impl_;
  {
    std::lock_guard lock(i.state_mutex);
    if (!i.running) return;
    i.running = false;
  }
  i.host.stop();
  asio::post(i.ioc, [&i] {
    beast::error_code ec;
    i.acceptor.close(ec);
  });
  {
    std::lock_guard lock(i.sessions_mutex);
    for (auto& [id, session] : i.sessions) session->close();
  }
  i.ioc.stop();
  if (i.io_thread.joinable()) i.io_thread.join();
  {
    std::lock_guard lock(i.sessions_mutex);
    i.sessions.clear();
  }
  i.stopped_cv.notify_all();
}

void Server::wait() {
  auto& i = *impl_;
  std::unique_lock lock(i.state_mutex);
  i.stopped_cv.wait(lock, [&i] { return !i.running; });
}

std::uint16_t Server::port() const { return impl_->bound_port; }

std::size_t Server::client_count() const {
  std::lock_guard lock(impl_->sessions_mutex);
  return impl_->sessions.size();
}

}  // namespace twinloop::gateway
