#include "triodflow/scenarios.hpp"

int main(int argc, char** argv) { return triodflow::run_cli(argc, argv); }
