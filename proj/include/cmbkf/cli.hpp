#ifndef CMBKF_CLI_HPP
#define CMBKF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cmbkf::cli {

/*
 * Runs one command-line invocation.  `args` holds the arguments after the
 * program name; `in` supplies the input document when `--input -` (the
 * default) is in effect; results and machine-readable error objects go to
 * `out`, usage diagnostics to `err`.
 *
 * Exit codes: 0 on success, 2 on malformed input (unparseable JSON, schema
 * violations, bad flags), 3 when a computation gives up with a certified
 * resource failure (precision exhausted, splitting-tower degree bound
 * exceeded, singular matrix under a full-rank requirement), 1 on anything
 * unexpected.
 */
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

} // namespace cmbkf::cli

#endif
