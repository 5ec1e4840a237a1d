class C12 {
  void f() {
    try (ExternalReader r = open()) {
      r.read();
    } catch (Exception e) {
      log();
    }
  }
  ExternalReader open() { return null; }
  void log() {}
}
