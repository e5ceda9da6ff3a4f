// One address of each kind for the same host, then a prefix move.

#include <iostream>

#include "lwcga/addr.hpp"
#include "lwcga/clock_source.hpp"
#include "lwcga/entropy_collector.hpp"
#include "lwcga/lwcga.hpp"
#include "lwcga/rsa_key.hpp"
#include "lwcga/send_cga.hpp"

using namespace lwcga;

int main() {
  const auto mac = MacAddress48::parse("00:11:22:33:44:55");
  const auto prefix = SubnetPrefix64::parse("2001:db8:1::/64");
  const auto moved_to = SubnetPrefix64::parse("2001:db8:2::/64");

  std::cout << "slaac   " << make_address(prefix, eui64_from_mac(mac)).to_string() << "\n";

  const KeyPair key = KeyPair::from_seed(7);
  auto cga_res = cga::cga_generate(key, cga::SecLevel(1), prefix, cga::Modifier128::from_u64(1, 2));
  std::cout << "send    " << cga_res.address.to_string() << "  (" << cga_res.hash2_iterations
            << " modifier tries)\n";
  std::cout << "verify  " << cga::to_string(cga::cga_verify(cga_res.address, cga_res.params, cga::SecLevel(1)))
            << "\n";

  entropy::VirtualClockConfig vc;
  vc.seed = 7;
  auto clock = entropy::ClockSource::make_virtual(vc);
  entropy::EntropyCollector collector;
  collector.collect_entropy(clock);
  auto binding = lwcga_generate(prefix, collector, clock, key);
  std::cout << "lwcga   " << binding.address.to_string() << "\n";

  auto moved = regenerate(binding, trigger::PrefixUpdate{moved_to}, RegenerationPolicy{}, collector, clock, key, 1);
  std::cout << "moved   " << moved.address.to_string() << "\n";
  auto send_moved = cga::cga_regenerate(cga_res.params, moved_to, cga::SecLevel(1));
  std::cout << "send mv " << send_moved.address.to_string() << "\n";
}
