#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "incasp/session.hpp"

int main(int argc, char** argv) {
    CLI::App app{"multi-shot ASP engine with overgrounding and tailoring"};

    int count = 1;
    std::string mode;
    bool text_dump = false;
    int port = -1;
    app.add_option("-n", count, "answer sets printed per run, 0 = all")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--mode", mode, "alternative output mode; only 'idlv' exists");
    app.add_flag("-t", text_dump, "with --mode=idlv: print the tailored ground program per run");
    app.add_option("--port", port, "serve the session protocol over TCP on this port")
        ->check(CLI::Range(0, 65535));

    CLI11_PARSE(app, argc, argv);

    if (!mode.empty() && mode != "idlv") {
        std::cerr << "unknown --mode value: " << mode << " (only 'idlv' is supported)\n";
        return 2;
    }
    if ((mode == "idlv") != text_dump) {
        std::cerr << "--mode=idlv and -t must be used together\n";
        return 2;
    }

    incasp::SessionConfig config;
    config.count = count;
    config.dump_mode = text_dump;

    try {
        if (port >= 0) {
            incasp::run_tcp_server(port, config, [](int chosen) {
                std::cerr << "listening on port " << chosen << "\n";
            });
        } else {
            incasp::run_session(std::cin, std::cout, config);
        }
    } catch (const incasp::Error& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
