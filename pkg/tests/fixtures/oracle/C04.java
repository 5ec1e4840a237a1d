class C04 {
  void f(int a, int b, int c, int d) {
    if (a > b && c < d) {
      a = b;
    }
  }
}
