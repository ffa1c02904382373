from embedkit.sim.cli import main

raise SystemExit(main())
