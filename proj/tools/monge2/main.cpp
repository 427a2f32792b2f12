#include "monge2/harness/cli.hpp"

int main(int argc, char** argv) { return monge2::harness::run(argc, argv); }
