#include "sperner/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto result = sperner::cli::dispatch(args);
    const std::string out = result.render();
    // Failures without --json go to stderr so pipelines see only results.
    if (result.status == sperner::cli::Status::Error && !result.json_output) {
        std::cerr << out;
    } else {
        std::cout << out;
    }
    return result.exit_code();
}
