#include <doctest.h>

#include "findmy/protocol.hpp"
#include "findmy/symbolic_provider.hpp"
#include "findmy/term_io.hpp"

using namespace findmy;
using namespace findmy::protocol;
using P = SymbolicProvider;

namespace {

struct Paired {
  P prov;
  EventLog<P> log;
  MasterBeaconKey<P> master;

  Paired() : master(make()) {}

  MasterBeaconKey<P> make() {
    RoleRegistry roles;
    roles.grant({"O"}, Role::Owner);
    roles.grant({"L"}, Role::Lta);
    return pair_devices<P>({"O"}, {"L"}, roles, prov, &log);
  }
};

}  // namespace

TEST_CASE("pairing consumes both roles and records KeyEst") {
  P prov;
  RoleRegistry roles;
  roles.grant({"O"}, Role::Owner);
  roles.grant({"L"}, Role::Lta);
  EventLog<P> log;
  auto m = pair_devices<P>({"O"}, {"L"}, roles, prov, &log);
  CHECK(render(m.d0) == "~d0.1");
  CHECK(render(m.sk0) == "~SK0.2");
  REQUIRE(log.size() == 1);
  CHECK(log[0].kind == EventKind::KeyEst);
  CHECK(render(log[0].params[0]) == "O");
  CHECK_FALSE(roles.holds({"O"}, Role::Owner));
  CHECK_THROWS_AS(pair_devices<P>({"O"}, {"L"}, roles, prov), PairingRefused);
}

TEST_CASE("pairing refuses an agent without the role") {
  P prov;
  RoleRegistry roles;
  roles.grant({"O"}, Role::Owner);
  CHECK_THROWS_AS(pair_devices<P>({"O"}, {"L"}, roles, prov), PairingRefused);
  CHECK(roles.holds({"O"}, Role::Owner));
}

TEST_CASE("the key schedule chains symmetric keys and diversifies d0") {
  Paired s;
  auto k1 = rotate_epoch(s.master, s.prov);
  auto k2 = rotate_epoch(s.master, k1, s.prov);
  CHECK(k1.epoch == 1);
  CHECK(k2.epoch == 2);
  CHECK(render(k1.sk) == "SK_fn(~SK0.2)");
  CHECK(render(k2.sk) == "SK_fn(SK_fn(~SK0.2))");
  CHECK(render(k2.d) == "di_fn(~d0.1,SK_fn(SK_fn(~SK0.2)))");
  CHECK(k2.p == terms::pk(k2.d));
  auto all = derive_epochs(s.master, 3, s.prov);
  REQUIRE(all.size() == 3);
  CHECK(all[1] == k2);
}

TEST_CASE("beacons log LPFS1 with Ok_s in the first epoch and LPFS2 afterwards") {
  Paired s;
  LostDevice<P> dev(s.master);
  dev.rotate(s.prov);
  CHECK_THROWS_AS(dev.emit(s.prov), ProtocolError);
  dev.enter_lost_mode();
  EventLog<P> log;
  auto b1 = dev.emit(s.prov, &log);
  REQUIRE(log.size() == 2);
  CHECK(log[0].kind == EventKind::LPFS1);
  CHECK(log[1].kind == EventKind::Ok_s);
  CHECK(b1.p == dev.current()->p);
  dev.rotate(s.prov);
  log.clear();
  dev.emit(s.prov, &log);
  REQUIRE(log.size() == 1);
  CHECK(log[0].kind == EventKind::LPFS2);
  CHECK(log[0].params[4] == dev.current()->d);
}

TEST_CASE("symbolic report round trip and epoch separation") {
  Paired s;
  auto keys = derive_epochs(s.master, 2, s.prov);
  Beacon<P> beacon{keys[1].p, {}};
  Term loc = terms::fresh("loc", 7), tf = terms::fresh("tF", 7);
  EventLog<P> log;
  auto report = finder_make_report(beacon, loc, tf, s.prov, &log);
  REQUIRE(log.size() == 1);
  CHECK(log[0].kind == EventKind::Floc);
  CHECK(report.report_id == terms::h(keys[1].p));
  CHECK(report.ciphertext.is(Symbol::AeadEnc));

  auto match = owner_match(keys, report.report_id, s.prov);
  REQUIRE(match.has_value());
  CHECK(match->epoch == 2);
  auto r = owner_decrypt(report, *match, s.prov);
  REQUIRE(std::holds_alternative<Recovered<P>>(r));
  CHECK(std::get<Recovered<P>>(r).location == loc);
  CHECK(std::get<Recovered<P>>(r).finder_time == tf);

  auto wrong = owner_decrypt(report, keys[0], s.prov);
  REQUIRE(std::holds_alternative<DecryptFailure>(wrong));
  CHECK(std::get<DecryptFailure>(wrong) == DecryptFailure::Authentication);
}

TEST_CASE("without the ECDH equation the owner cannot decrypt") {
  P prov(RewriteSystem(false));
  RoleRegistry roles;
  roles.grant({"O"}, Role::Owner);
  roles.grant({"L"}, Role::Lta);
  auto m = pair_devices<P>({"O"}, {"L"}, roles, prov);
  auto keys = derive_epochs(m, 1, prov);
  auto report = finder_make_report<P>({keys[0].p, {}}, terms::pub("loc"), terms::pub("t"), prov);
  CHECK(std::holds_alternative<DecryptFailure>(owner_decrypt(report, keys[0], prov)));
}

TEST_CASE("the report server keeps reports per id and requires authentication") {
  Paired s;
  auto keys = derive_epochs(s.master, 1, s.prov);
  auto r = finder_make_report<P>({keys[0].p, {}}, terms::pub("loc"), terms::pub("t"), s.prov);
  ReportServer<P> server;
  server.store(r, 5);
  server.store(r, 6);
  CHECK(server.size() == 2);
  CHECK_THROWS_AS(server.fetch({{"O"}, false}, r.report_id), AuthenticationRequired);
  auto got = server.fetch({{"O"}, true}, r.report_id);
  REQUIRE(got.size() == 2);
  CHECK(got[0].upload_time == 5u);
  CHECK(server.fetch({{"O"}, true}, terms::h(terms::pub("other"))).empty());
}
