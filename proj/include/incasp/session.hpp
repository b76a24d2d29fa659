#pragma once

#include "incasp/engine.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace incasp {

// One XML command element: <load path=""/>, <run/>, <forget type=""/>,
// <reset/>, or <exit/>. Unknown elements and attributes are rejected.
struct Command {
    enum class Kind { Load, Run, Forget, Reset, Exit };
    Kind kind = Kind::Run;
    std::string path;       // Load
    char forget_mode = 'r'; // Forget: 'r' or 'p'
};

// Parses one command line; throws Error on anything but the five shapes.
Command parse_command(const std::string& line);

struct SessionConfig {
    int count = 1;          // answer sets printed per Run; 0 = all
    bool dump_mode = false; // Run emits the tailored ground text, no solving
    bool tailoring = true;
};

// The stateful front end: accumulates a fixed program P before the first
// run, then evaluates one shot per <run/> over the facts loaded since the
// previous one. Every input line is answered by a status line (`OK` or
// `ERROR: <msg>`), Run output lines, and a terminating blank line.
class Session {
public:
    explicit Session(SessionConfig config = {}, std::string base_dir = "");

    // Full response text for one input line, trailing blank line included;
    // empty input yields an empty response.
    std::string handle_line(const std::string& line);

    bool finished() const { return finished_; }

private:
    std::string handle(const Command& command);
    std::string do_load(const std::string& path);
    std::string do_run();
    std::string do_forget(char mode);
    std::string resolve(const std::string& path) const;

    SessionConfig config_;
    std::string base_dir_; // non-empty: relative load paths resolve against it
    Program program_;
    bool program_loaded_ = false;
    std::vector<Atom> pending_facts_;
    std::unique_ptr<MultiShotEngine> engine_; // created at the first Run
    bool finished_ = false;
};

// Reads commands line by line until Exit or end of input, writing each
// response to `out` as it is produced.
void run_session(std::istream& in, std::ostream& out, const SessionConfig& config = {},
                 const std::string& base_dir = "");

// Serves sessions over TCP on the loopback interface, one client at a time;
// returns once a client issues <exit/>. Port 0 picks a free port; the chosen
// port is reported through on_listening before the first accept.
void run_tcp_server(int port, const SessionConfig& config,
                    const std::function<void(int)>& on_listening = {},
                    const std::string& base_dir = "");

} // namespace incasp
