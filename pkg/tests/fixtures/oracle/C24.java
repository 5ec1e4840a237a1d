class C24 {
  void f(int x, int y) {
    if (x > 0) {
      while (y > 0 || x > 10) {
        if (x == y && y != 3 && x < 100) {
          y--;
        }
        y--;
      }
    }
  }
}
