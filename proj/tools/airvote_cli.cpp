#include <airvote/cli.hpp>

int main(int argc, char** argv) { return airvote::cli::run_cli(argc, argv); }
