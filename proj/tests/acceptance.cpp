// Acceptance harness: runs every criterion once, printing one PASS/FAIL line
// each, then checks byte-identical reproducibility of `reclab selftest --seed 0`
// by invoking the CLI twice when its path is supplied via --reclab.

#include "reclab/selftest.hpp"

#include <array>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

std::string run_command_capture(const std::string& command, int& exit_code) {
    std::array<char, 4096> buffer{};
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return output;
    }
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        output.append(buffer.data(), got);
    exit_code = pclose(pipe);
    return output;
}

} // namespace

int main(int argc, char** argv) {
    std::string reclab_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--reclab") reclab_path = argv[i + 1];

    const std::uint64_t seed = 0;
    std::vector<reclab::CriterionResult> results = reclab::run_criteria(seed);

    reclab::CriterionResult repro{12, "reproducibility", false, ""};
    if (reclab_path.empty()) {
        repro.detail = "skipped: no --reclab path supplied";
    } else {
        int code1 = 0, code2 = 0;
        const std::string cmd = reclab_path + " selftest --seed 0";
        const std::string out1 = run_command_capture(cmd, code1);
        const std::string out2 = run_command_capture(cmd, code2);
        repro.pass = !out1.empty() && out1 == out2 && code1 == 0 && code2 == 0;
        repro.detail = repro.pass
                           ? "two `reclab selftest --seed 0` runs byte-identical, both exit 0"
                           : "selftest runs differ or exited nonzero";
    }
    results.push_back(repro);

    bool all = true;
    for (const reclab::CriterionResult& c : results) {
        std::printf("[%2d/12] %s %s: %s\n", c.index, c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("RESULT %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
