#include "uavplace/cli.hpp"

int main(int argc, char** argv) { return uavplace::cli::run(argc, argv); }
