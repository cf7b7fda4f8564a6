#include <iostream>

#include "commands.hpp"
#include "symdyn/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"symdyn: densities, omega-limit sets and SFT constructions on one-sided shifts"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads, 0 = all cores; never changes the output")
      ->capture_default_str();
  const auto action = symdyn::cli::register_commands(app, threads);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const symdyn::Error& e) {
    std::cerr << "symdyn: " << e.what() << " [" << symdyn::to_string(e.code()) << "]\n";
    return e.code() == symdyn::ErrorCode::internal ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "symdyn: " << e.what() << "\n";
    return 1;
  }
}
