#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apde/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    apde::cli::ExperimentConfig cfg = apde::cli::parse_config(args);
    return apde::cli::dispatch(cfg);
  } catch (const CLI::CallForHelp&) {
    CLI::App app{"almost-periodic entropy-solution laboratory"};
    std::cout
        << "usage: apde <command> [flags]\n"
           "commands: spectrum nondegeneracy simulate decay contraction\n"
           "          kinetic-probe gallery\n"
           "flags: --config --model --signal --signal-b --grid-n --grid-l\n"
           "       --end-time --cfl-c --cfl-d --viscosity --diagnostic-stride\n"
           "       --field-stride --delta --ell-schedule --refinement\n"
           "       --decay-threshold --persist-threshold --xi-nodes\n"
           "       --omega-xi-nodes --sphere-samples --eps-zero --expect\n"
           "       --out --seed\n";
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << apde::kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
