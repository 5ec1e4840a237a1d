class C17 {
  void f() {
    Optional<InternalFoo> maybe = find();
    if (maybe.isPresent()) {
      use(maybe);
    }
  }
  Optional<InternalFoo> find() { return null; }
  void use(Object o) {}
}
