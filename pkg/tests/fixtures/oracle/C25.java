class C25 {
  private InternalDep dep;

  void touch() {
    noop();
  }
  void noop() {}
}
