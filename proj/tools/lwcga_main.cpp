#include "lwcga/cli.hpp"

int main(int argc, char** argv) { return lwcga::cli::run(argc, argv); }
