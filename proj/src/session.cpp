#include "incasp/session.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "incasp/parser.hpp"

namespace incasp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_name_char(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

} // namespace

Command parse_command(const std::string& line) {
    std::string_view s = trim(line);
    if (s.size() < 3 || s.front() != '<' || s.substr(s.size() - 2) != "/>")
        throw Error("malformed command: expected a self-closing XML element");
    std::string_view inner = trim(s.substr(1, s.size() - 3));

    std::size_t i = 0;
    while (i < inner.size() && is_name_char(inner[i])) ++i;
    std::string name(inner.substr(0, i));
    if (name.empty()) throw Error("malformed command: missing element name");

    std::map<std::string, std::string> attributes;
    while (i < inner.size()) {
        while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
        if (i == inner.size()) break;
        std::size_t start = i;
        while (i < inner.size() && is_name_char(inner[i])) ++i;
        std::string key(inner.substr(start, i - start));
        if (key.empty() || i == inner.size() || inner[i] != '=')
            throw Error("malformed command: expected attribute=\"value\"");
        ++i;
        if (i == inner.size() || inner[i] != '"')
            throw Error("malformed command: attribute value must be double-quoted");
        ++i;
        std::size_t end = inner.find('"', i);
        if (end == std::string_view::npos)
            throw Error("malformed command: unterminated attribute value");
        if (!attributes.emplace(key, std::string(inner.substr(i, end - i))).second)
            throw Error("malformed command: duplicate attribute '" + key + "'");
        i = end + 1;
    }

    auto expect_only = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, _] : attributes) {
            bool ok = false;
            for (const char* a : allowed)
                if (key == a) ok = true;
            if (!ok) throw Error("malformed command: unknown attribute '" + key + "'");
        }
    };

    Command cmd;
    if (name == "load") {
        expect_only({"path"});
        auto it = attributes.find("path");
        if (it == attributes.end()) throw Error("malformed command: <load> needs a path");
        cmd.kind = Command::Kind::Load;
        cmd.path = it->second;
    } else if (name == "run") {
        expect_only({});
        cmd.kind = Command::Kind::Run;
    } else if (name == "forget") {
        expect_only({"type"});
        auto it = attributes.find("type");
        if (it == attributes.end()) throw Error("malformed command: <forget> needs a type");
        if (it->second != "r" && it->second != "p")
            throw Error("malformed command: forget type must be \"r\" or \"p\"");
        cmd.kind = Command::Kind::Forget;
        cmd.forget_mode = it->second[0];
    } else if (name == "reset") {
        expect_only({});
        cmd.kind = Command::Kind::Reset;
    } else if (name == "exit") {
        expect_only({});
        cmd.kind = Command::Kind::Exit;
    } else {
        throw Error("unknown command: " + name);
    }
    return cmd;
}

Session::Session(SessionConfig config, std::string base_dir)
    : config_(config), base_dir_(std::move(base_dir)) {}

std::string Session::handle_line(const std::string& raw) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) return "";
    try {
        return handle(parse_command(line));
    } catch (const Error& e) {
        return std::string("ERROR: ") + e.what() + "\n\n";
    }
}

std::string Session::handle(const Command& command) {
    switch (command.kind) {
    case Command::Kind::Load:
        return do_load(command.path);
    case Command::Kind::Run:
        return do_run();
    case Command::Kind::Forget:
        return do_forget(command.forget_mode);
    case Command::Kind::Reset:
        engine_.reset();
        program_ = Program{};
        program_loaded_ = false;
        pending_facts_.clear();
        return "OK\n\n";
    case Command::Kind::Exit:
        finished_ = true;
        return "OK\n\n";
    }
    throw Error("unknown command");
}

std::string Session::resolve(const std::string& path) const {
    if (base_dir_.empty() || (!path.empty() && path.front() == '/')) return path;
    return base_dir_ + "/" + path;
}

std::string Session::do_load(const std::string& path) {
    std::ifstream in(resolve(path));
    if (!in) throw Error("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();

    ParsedUnit unit;
    try {
        unit = parse_program(buffer.str());
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }

    bool rule_file = !unit.rules.empty() || !unit.annotations.empty();
    if (!rule_file) {
        pending_facts_.insert(pending_facts_.end(), unit.facts.begin(), unit.facts.end());
        return "OK\n\n";
    }
    if (engine_) return "OK\nWARNING: rule files after the first run are discarded\n\n";
    append_unit(program_, unit);
    program_loaded_ = true;
    return "OK\n\n";
}

std::string Session::do_run() {
    if (!program_loaded_) throw Error("no program loaded");
    if (!engine_) {
        EngineConfig engine_config;
        engine_config.tailoring = config_.tailoring;
        engine_config.solve.count = config_.count;
        engine_config.solve.optimize = true;
        engine_ = std::make_unique<MultiShotEngine>(program_, engine_config);
    }
    std::vector<Atom> facts = std::move(pending_facts_);
    pending_facts_.clear();

    ShotOutcome outcome = engine_->run_shot(facts, !config_.dump_mode);

    std::string out = "OK\n";
    const AtomTable& table = engine_->store().table();
    if (config_.dump_mode) {
        out += to_text(outcome.view, table);
    } else if (outcome.models.empty()) {
        out += "INCONSISTENT\n";
    } else {
        for (const AnswerSet& model : outcome.models)
            out += format_answer_set(model, table) + "\n";
        if (!outcome.view.weaks.empty()) {
            // pad with the levels present in the ground program so a total of
            // zero still prints as 0@l
            std::map<int, std::int64_t> cost = outcome.models.front().cost;
            for (const SolverRule& weak : outcome.view.weaks) cost.emplace(weak.level, 0);
            std::string line = format_cost(cost);
            if (!line.empty()) out += line + "\n";
            out += "OPTIMUM\n";
        }
    }
    out += "\n";
    return out;
}

std::string Session::do_forget(char mode) {
    if (!engine_) throw Error("nothing to forget");
    engine_->forget(mode);
    return "OK\n\n";
}

void run_session(std::istream& in, std::ostream& out, const SessionConfig& config,
                 const std::string& base_dir) {
    Session session(config, base_dir);
    std::string line;
    while (!session.finished() && std::getline(in, line)) {
        out << session.handle_line(line);
        out.flush();
    }
}

namespace {

void send_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return; // client went away; nothing sensible to do
        sent += static_cast<std::size_t>(n);
    }
}

[[noreturn]] void throw_errno(const char* what) {
    throw Error(std::string(what) + ": " + std::strerror(errno));
}

} // namespace

void run_tcp_server(int port, const SessionConfig& config,
                    const std::function<void(int)>& on_listening, const std::string& base_dir) {
    int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw_errno("socket");
    int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in address{};
    address.sin_family = AF_INET;
    address.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    address.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::bind(listener, reinterpret_cast<sockaddr*>(&address), sizeof address) < 0) {
        ::close(listener);
        throw_errno("bind");
    }
    if (::listen(listener, 1) < 0) {
        ::close(listener);
        throw_errno("listen");
    }
    socklen_t length = sizeof address;
    ::getsockname(listener, reinterpret_cast<sockaddr*>(&address), &length);
    if (on_listening) on_listening(ntohs(address.sin_port));

    bool exited = false;
    while (!exited) {
        int client = ::accept(listener, nullptr, nullptr);
        if (client < 0) {
            if (errno == EINTR) continue;
            ::close(listener);
            throw_errno("accept");
        }
        Session session(config, base_dir);
        std::string buffer;
        char chunk[4096];
        bool open = true;
        while (open && !session.finished()) {
            std::size_t newline;
            while (!session.finished() && (newline = buffer.find('\n')) != std::string::npos) {
                std::string line = buffer.substr(0, newline);
                buffer.erase(0, newline + 1);
                send_all(client, session.handle_line(line));
            }
            if (session.finished()) break;
            ssize_t n = ::recv(client, chunk, sizeof chunk, 0);
            if (n <= 0) {
                open = false;
                if (!buffer.empty()) send_all(client, session.handle_line(buffer));
            } else {
                buffer.append(chunk, static_cast<std::size_t>(n));
            }
        }
        exited = session.finished();
        ::close(client);
    }
    ::close(listener);
}

} // namespace incasp
