#include <laacoex/cli.hpp>

int main(int argc, char** argv) { return laacoex::cli::run_cli(argc, argv); }
