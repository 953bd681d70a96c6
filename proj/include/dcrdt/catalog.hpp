#ifndef DCRDT_CATALOG_HPP
#define DCRDT_CATALOG_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcrdt/scenario.hpp"
#include "dcrdt/simreport.hpp"

namespace dcrdt {

// Runs scenarios for one concrete datatype instantiation.
class Driver {
 public:
  virtual ~Driver() = default;

  virtual const std::string& name() const = 0;
  virtual bool causal() const = 0;

  virtual SimReport run(const Scenario& sc,
                        std::optional<uint64_t> seed_override) const = 0;
  virtual TwinReport twin(const Scenario& sc,
                          std::optional<uint64_t> seed_override) const = 0;
  virtual SizebenchReport sizebench(uint64_t ops) const = 0;
};

// Lowercases and strips whitespace; resolves aliases (2pset, mvregister).
std::string normalize_typespec(const std::string& spec);

// Instantiates the driver for a type spec such as "gcounter" or
// "ormap(string, awset(string))". Unknown specs raise scenario_error listing
// the supported ones.
std::unique_ptr<Driver> make_driver(const std::string& spec);

const std::vector<std::string>& supported_datatypes();

}  // namespace dcrdt

#endif  // DCRDT_CATALOG_HPP
