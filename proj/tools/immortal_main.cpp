#include <iostream>

#include "immortal/commands.hpp"

int main(int argc, char** argv)
{
  return immortal::run_cli(argc, argv, std::cout, std::cerr);
}
