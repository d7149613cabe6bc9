#include "leakaudit/cli.hpp"

int main(int argc, char** argv) { return leakaudit::cli::run(argc, argv); }
