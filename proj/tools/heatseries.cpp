#include "heatseries/cli.hpp"

int main(int argc, char** argv) { return heatseries::cli::run(argc, argv); }
