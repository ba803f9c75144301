#ifndef BNSL_CLI_HPP
#define BNSL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bnsl/search.hpp"

namespace bnsl {

/// Runs one command line (arguments after the program name). Returns the
/// process exit status: 0 success, 1 file or data error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "<name> <- <parents...>" per node, then "# score <value>".
void write_dag(const ScoreTable& table, const Dag& g, std::ostream& out);

}  // namespace bnsl

#endif  // BNSL_CLI_HPP
