// SAT-competition front end for the embedded DPLL: `cpf-dpll file.cnf`.
// Prints an `s` line and, when satisfiable, one `v` line; exits 10 / 20.
#include <fstream>
#include <iostream>

#include "cpfsat/satsolver.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: cpf-dpll <file.cnf>\n";
    return 1;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << '\n';
    return 1;
  }
  try {
    cpfsat::Cnf cnf = cpfsat::read_dimacs(in);
    cpfsat::SatResult r = cpfsat::embedded_dpll(cnf);
    if (r.sat()) {
      std::cout << "s SATISFIABLE\nv";
      for (int v = 1; v <= cnf.var_count(); ++v) std::cout << ' ' << (r.model[v] ? v : -v);
      std::cout << " 0\n";
      return 10;
    }
    if (r.unsat()) {
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    }
    std::cout << "s UNKNOWN\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "cpf-dpll: " << e.what() << '\n';
    return 1;
  }
}
