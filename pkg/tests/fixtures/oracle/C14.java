class C14 {
  private InternalRepo repo;

  void f() {
    repo.a();
    repo.b();
    int x = repo.size() + repo.count();
  }
}
