#include "focusloop/server.hpp"

#include <deque>
#include <iostream>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <boost/beast/websocket.hpp>

#include "focusloop/errors.hpp"

namespace focusloop {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

struct Target {
  std::vector<std::string> parts;
  std::map<std::string, std::string> query;
};

Target parse_target(const std::string& target) {
  Target t;
  const auto q = target.find('?');
  const std::string path = target.substr(0, q);
  std::string segment;
  for (char c : path) {
    if (c != '/') {
      segment += c;
    } else if (!segment.empty()) {
      t.parts.push_back(std::move(segment));
      segment.clear();
    }
  }
  if (!segment.empty()) t.parts.push_back(std::move(segment));
  if (q == std::string::npos) return t;
  std::string key, value;
  bool in_value = false;
  auto flush = [&] {
    if (in_value) t.query[key] = value;
    key.clear();
    value.clear();
    in_value = false;
  };
  for (std::size_t i = q + 1; i < target.size(); ++i) {
    const char c = target[i];
    if (c == '&') flush();
    else if (c == '=' && !in_value) in_value = true;
    else (in_value ? value : key) += c;
  }
  flush();
  return t;
}

std::uint64_t from_seq_of(const Target& t) {
  auto it = t.query.find("from_seq");
  if (it == t.query.end()) return 0;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw InputRejected("from_seq must be a non-negative integer");
  }
}

http::response<http::string_body> make_response(const http::request<http::string_body>& req, http::status status,
                                                const json& body) {
  http::response<http::string_body> res{status, req.version()};
  res.set(http::field::server, "focusloop");
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

json error_body(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, SessionManager& mgr, std::string handle, std::uint64_t from_seq)
      : ws_(std::move(socket)), mgr_(mgr), handle_(std::move(handle)), from_seq_(from_seq) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<WsSession> weak = shared_from_this();
    auto exec = ws_.get_executor();
    try {
      sub_ = mgr_.subscribe(
          handle_, from_seq_,
          [weak, exec](const json& msg) {
            net::post(exec, [weak, text = msg.dump()] {
              if (auto self = weak.lock()) self->send(text);
            });
          },
          SteadyClock::now());
    } catch (const std::exception& e) {
      send(json{{"type", "error"}, {"session", handle_}, {"body", {{"message", e.what()}}}}.dump());
      return;
    }
    subscribed_ = true;
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      close();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      mgr_.input(handle_, json::parse(text), SteadyClock::now());
    } catch (const std::exception& e) {
      send(json{{"type", "error"}, {"session", handle_}, {"body", {{"message", e.what()}}}}.dump());
    }
    do_read();
  }

  void send(std::string text) {
    queue_.push_back(std::move(text));
    if (queue_.size() > 1) return;
    do_write();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      close();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) do_write();
  }

  void close() {
    if (!subscribed_) return;
    subscribed_ = false;
    try {
      mgr_.unsubscribe(handle_, sub_, SteadyClock::now());
    } catch (const NotFound&) {
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionManager& mgr_;
  std::string handle_;
  std::uint64_t from_seq_;
  std::uint64_t sub_ = 0;
  bool subscribed_ = false;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, SessionManager& mgr) : stream_(std::move(socket)), mgr_(mgr) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;

    const auto raw = req_.target();
    const Target target = parse_target(std::string(raw.data(), raw.size()));
    if (websocket::is_upgrade(req_)) {
      if (target.parts.size() == 3 && target.parts[0] == "sessions" && target.parts[2] == "stream" &&
          mgr_.exists(target.parts[1])) {
        std::uint64_t from = 0;
        try {
          from = from_seq_of(target);
        } catch (const InputRejected&) {
        }
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), mgr_, target.parts[1], from)->run(std::move(req_));
        return;
      }
      write(make_response(req_, http::status::not_found, error_body("not_found", "no such stream")));
      return;
    }
    write(route(target));
  }

  http::response<http::string_body> route(const Target& t) {
    const auto method = req_.method();
    const auto now = SteadyClock::now();
    try {
      if (method == http::verb::options) {
        auto res = make_response(req_, http::status::no_content, json::object());
        res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
        res.set(http::field::access_control_allow_headers, "Content-Type");
        res.body().clear();
        res.prepare_payload();
        return res;
      }
      if (t.parts.size() == 1 && t.parts[0] == "health" && method == http::verb::get) {
        return make_response(req_, http::status::ok, {{"status", "ok"}, {"sessions", mgr_.size()}});
      }
      if (t.parts.size() == 1 && t.parts[0] == "sessions" && method == http::verb::post) {
        const auto handle = mgr_.create(json::parse(req_.body()));
        return make_response(req_, http::status::created,
                             {{"session", handle}, {"state", to_string(mgr_.state(handle))}});
      }
      if (t.parts.size() >= 2 && t.parts[0] == "sessions") {
        const auto& h = t.parts[1];
        if (t.parts.size() == 2 && method == http::verb::get) {
          return make_response(req_, http::status::ok, mgr_.status(h));
        }
        if (t.parts.size() == 3) {
          const auto& action = t.parts[2];
          if (action == "start" && method == http::verb::post) {
            mgr_.start(h, now);
            return make_response(req_, http::status::ok, mgr_.status(h));
          }
          if (action == "input" && method == http::verb::post) {
            mgr_.input(h, json::parse(req_.body()), now);
            return make_response(req_, http::status::accepted, mgr_.status(h));
          }
          if (action == "abort" && method == http::verb::post) {
            const auto rep = mgr_.abort(h, now);
            return make_response(req_, http::status::ok, {{"state", to_string(mgr_.state(h))}, {"report", to_json(rep)}});
          }
          if (action == "report" && method == http::verb::get) {
            return make_response(req_, http::status::ok, to_json(mgr_.report(h)));
          }
        }
      }
      return make_response(req_, http::status::not_found, error_body("not_found", std::string(req_.target().data(), req_.target().size())));
    } catch (const ValidationError& e) {
      json fields = json::array();
      for (const auto& f : e.errors()) fields.push_back({{"field", f.field}, {"message", f.message}});
      return make_response(req_, http::status::bad_request,
                           {{"error", "validation"}, {"message", e.what()}, {"fields", fields}});
    } catch (const NotFound& e) {
      return make_response(req_, http::status::not_found, error_body("not_found", e.what()));
    } catch (const StateError& e) {
      return make_response(req_, http::status::conflict, error_body("state", e.what()));
    } catch (const InputRejected& e) {
      return make_response(req_, http::status::bad_request, error_body("input", e.what()));
    } catch (const json::exception& e) {
      return make_response(req_, http::status::bad_request, error_body("json", e.what()));
    } catch (const std::exception& e) {
      return make_response(req_, http::status::internal_server_error, error_body("internal", e.what()));
    }
  }

  void write(http::response<http::string_body> res) {
    auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
    http::async_write(stream_, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (!sp->keep_alive()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->do_read();
    });
  }

  beast::tcp_stream stream_;
  SessionManager& mgr_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

}  // namespace

struct Server::Impl {
  ServerOptions options;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::steady_timer pump_timer{ioc};
  SessionManager mgr;
  std::thread background;

  explicit Impl(ServerOptions o) : options(std::move(o)), mgr(options.service) {
    const tcp::endpoint ep{net::ip::make_address(options.address), options.port};
    acceptor.open(ep.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen(net::socket_base::max_listen_connections);
    do_accept();
    schedule_pump();
  }

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpSession>(std::move(socket), mgr)->run();
      if (acceptor.is_open()) do_accept();
    });
  }

  void schedule_pump() {
    pump_timer.expires_after(options.pump_interval);
    pump_timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      try {
        mgr.pump(SteadyClock::now());
      } catch (const std::exception& e) {
        std::cerr << "pump failed: " << e.what() << "\n";
      }
      schedule_pump();
    });
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

SessionManager& Server::sessions() { return impl_->mgr; }

void Server::run() { impl_->ioc.run(); }

void Server::start_background() {
  impl_->background = std::thread([this] { impl_->ioc.run(); });
}

void Server::stop() {
  if (!impl_) return;
  impl_->ioc.stop();
  if (impl_->background.joinable()) impl_->background.join();
}

}  // namespace focusloop
